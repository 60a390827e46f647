#include <doctest.h>

#include <algorithm>

#include "phishlens/ml/rng.hpp"
#include "phishlens/qr.hpp"
#include "phishlens/reed_solomon.hpp"
#include "support.hpp"

using namespace phishlens;
using namespace phishlens::qr;

namespace {

Bytes round_trip(ByteView payload, EcLevel level, std::optional<int> mask = std::nullopt) {
    return decode(render(encode(payload, level, mask), 4));
}

Bytes random_payload(ml::Rng& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.below(256));
    return out;
}

}  // namespace

TEST_CASE("capacity table") {
    CHECK(capacity(1, EcLevel::L) == 17);
    CHECK(capacity(1, EcLevel::M) == 14);
    CHECK(capacity(1, EcLevel::Q) == 11);
    CHECK(capacity(1, EcLevel::H) == 7);
    CHECK(capacity(10, EcLevel::L) == 271);
    CHECK(capacity(10, EcLevel::H) == 119);
}

TEST_CASE("encode picks the smallest version") {
    const auto m = encode(as_bytes("0123456789"), EcLevel::M);
    CHECK(m.version == 1);
    CHECK(m.size == 21);
    CHECK(encode(as_bytes(std::string(15, 'a')), EcLevel::M).version == 2);

    const auto empty = encode({}, EcLevel::M);
    CHECK(empty.version == 1);
    CHECK(decode(render(empty)).empty());

    CHECK(test::error_of([] { encode(as_bytes(std::string(300, 'x')), EcLevel::H); }) == Errc::payload_too_long);
}

TEST_CASE("render geometry") {
    const auto b = render(encode(as_bytes("hi"), EcLevel::M), 4, 4);
    CHECK(b.width == 116);
    CHECK(b.height == 116);
    CHECK(std::all_of(b.pixels.begin(), b.pixels.end(), [](std::uint8_t p) { return p == 0 || p == 255; }));
    CHECK(render(encode(as_bytes("hi"))).pixels == render(encode(as_bytes("hi"))).pixels);
    CHECK(test::error_of([] { render(encode(as_bytes("hi")), 0); }) == Errc::invalid_argument);
}

TEST_CASE("round trip of a URL") {
    const std::string url = "https://example.test/a?b=1";
    const auto out = round_trip(as_bytes(url), EcLevel::M);
    CHECK(std::string(out.begin(), out.end()) == url);
}

TEST_CASE("every forced mask decodes") {
    for (int mask = 0; mask < 8; ++mask) {
        const auto m = encode(as_bytes("mask test payload"), EcLevel::Q, mask);
        CHECK(m.mask_id == mask);
        const auto r = decode_detailed(render(m, 3));
        CHECK(r.mask_id == mask);
        CHECK(std::string(r.payload.begin(), r.payload.end()) == "mask test payload");
    }
}

TEST_CASE("random payloads across versions and levels") {
    ml::Rng rng(11);
    for (auto level : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H}) {
        for (int v = 1; v <= kMaxVersion; ++v) {
            const auto n = rng.below(capacity(v, level) + 1);
            const auto payload = random_payload(rng, n);
            CHECK(round_trip(payload, level) == payload);
        }
    }
}

TEST_CASE("corruption at the correction capacity") {
    ml::Rng rng(5);
    for (auto level : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H}) {
        for (int v : {1, 3, 5, 7, 10}) {
            const auto payload = random_payload(rng, capacity(v, level));
            auto m = encode(payload, level);
            REQUIRE(m.version == v);
            const auto blocks = block_layout(v, level);
            const auto modules = codeword_modules(v);
            const int block = static_cast<int>(rng.below(blocks.size()));
            const auto shape = blocks[static_cast<std::size_t>(block)];
            const int total = shape.data_codewords + shape.ec_codewords;
            std::vector<int> idx(static_cast<std::size_t>(total));
            for (int i = 0; i < total; ++i) idx[static_cast<std::size_t>(i)] = i;
            rng.shuffle(idx);
            const int t = shape.ec_codewords / 2;
            for (int k = 0; k < t; ++k) {
                const int pos = interleaved_position(v, level, block, idx[static_cast<std::size_t>(k)]);
                for (const auto& [x, y] : modules[static_cast<std::size_t>(pos)]) m.flip(x, y);
            }
            const auto r = decode_detailed(render(m, 2));
            CHECK(r.payload == payload);
            CHECK(r.corrected_codewords == t);
        }
    }
}

TEST_CASE("blank and noisy bitmaps") {
    QrBitmap blank{100, 100, 1, 0, Bytes(100 * 100, 255)};
    CHECK(test::error_of([&] { decode(blank); }) == Errc::no_finder_patterns);
    QrBitmap dark{50, 50, 1, 0, Bytes(50 * 50, 0)};
    CHECK(test::error_of([&] { decode(dark); }).has_value());
}

TEST_CASE("reed-solomon block codec") {
    ml::Rng rng(3);
    for (int ec : {7, 10, 18, 30}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto data = random_payload(rng, 1 + rng.below(60));
            Bytes block = data;
            const auto parity = rs::encode(data, ec);
            REQUIRE(parity.size() == static_cast<std::size_t>(ec));
            block.insert(block.end(), parity.begin(), parity.end());
            const Bytes clean = block;
            std::vector<std::size_t> idx(block.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            rng.shuffle(idx);
            const int t = ec / 2;
            for (int k = 0; k < t; ++k) block[idx[static_cast<std::size_t>(k)]] ^= static_cast<std::uint8_t>(1 + rng.below(255));
            CHECK(rs::decode(block, ec) == t);
            CHECK(block == clean);
        }
    }
    CHECK(rs::gf_mul(2, 128) == 0x1D);
    CHECK(rs::gf_exp(rs::gf_log(77)) == 77);
}

TEST_CASE("pgm round trip") {
    const auto b = render(encode(as_bytes("pgm")), 2, 4);
    const auto bytes = write_pgm(b);
    const std::string header = "P5\n" + std::to_string(b.width) + " " + std::to_string(b.height) + "\n255\n";
    CHECK(std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(header.size())) == header);
    const auto back = read_pgm(bytes);
    CHECK(back.width == b.width);
    CHECK(back.pixels == b.pixels);
    CHECK(test::error_of([] { read_pgm(as_bytes("P6\n1 1\n255\nx")); }) == Errc::parse_error);
}
