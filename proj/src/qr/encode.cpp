#include <algorithm>
#include <climits>
#include <cstdlib>
#include <string>

#include "phishlens/error.hpp"
#include "phishlens/qr.hpp"
#include "phishlens/reed_solomon.hpp"
#include "symbol.hpp"

namespace phishlens::qr {
namespace {

class BitBuffer {
public:
    void append(std::uint32_t value, int bits) {
        for (int i = bits - 1; i >= 0; --i) bits_.push_back(((value >> i) & 1) != 0);
    }
    std::size_t size() const { return bits_.size(); }
    Bytes to_bytes() const {
        Bytes out((bits_.size() + 7) / 8, 0);
        for (std::size_t i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out[i >> 3] |= static_cast<std::uint8_t>(0x80 >> (i & 7));
        return out;
    }

private:
    std::vector<bool> bits_;
};

// Splits data into blocks, appends EC codewords and interleaves.
Bytes add_ec_and_interleave(const Bytes& data, int version, EcLevel level) {
    const int blocks = detail::num_blocks(version, level);
    const int ec_len = detail::ec_codewords_per_block(version, level);
    const int raw = detail::raw_data_modules(version) / 8;
    const int short_blocks = blocks - raw % blocks;
    const int short_len = raw / blocks;

    std::vector<Bytes> all;
    std::size_t k = 0;
    for (int i = 0; i < blocks; ++i) {
        std::size_t len = static_cast<std::size_t>(short_len - ec_len + (i < short_blocks ? 0 : 1));
        Bytes block(data.begin() + static_cast<std::ptrdiff_t>(k), data.begin() + static_cast<std::ptrdiff_t>(k + len));
        k += len;
        Bytes ec = rs::encode(block, ec_len);
        if (i < short_blocks) block.push_back(0);  // placeholder, skipped below
        block.insert(block.end(), ec.begin(), ec.end());
        all.push_back(std::move(block));
    }
    Bytes out;
    for (int i = 0; i <= short_len; ++i)
        for (int j = 0; j < blocks; ++j)
            if (i != short_len - ec_len || j >= short_blocks) out.push_back(all[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    return out;
}

long penalty(const QrMatrix& m) {
    const int n = m.size;
    long score = 0;
    // runs of 5+ in rows and columns
    for (int pass = 0; pass < 2; ++pass) {
        for (int a = 0; a < n; ++a) {
            int run = 1;
            bool prev = pass == 0 ? m.get(0, a) : m.get(a, 0);
            for (int b = 1; b < n; ++b) {
                bool cur = pass == 0 ? m.get(b, a) : m.get(a, b);
                if (cur == prev) {
                    ++run;
                } else {
                    if (run >= 5) score += 3 + (run - 5);
                    run = 1;
                    prev = cur;
                }
            }
            if (run >= 5) score += 3 + (run - 5);
        }
    }
    // 2x2 blocks
    for (int y = 0; y + 1 < n; ++y)
        for (int x = 0; x + 1 < n; ++x) {
            bool c = m.get(x, y);
            if (c == m.get(x + 1, y) && c == m.get(x, y + 1) && c == m.get(x + 1, y + 1)) score += 3;
        }
    // finder-like 1011101 with four light modules on one side
    static constexpr int kPattern[2][11] = {{1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0}, {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1}};
    for (int pass = 0; pass < 2; ++pass) {
        for (int a = 0; a < n; ++a) {
            for (int b = -4; b < n; ++b) {
                for (const auto& pat : kPattern) {
                    bool match = true;
                    for (int k = 0; k < 11 && match; ++k) {
                        int pos = b + k;
                        bool dark = pos >= 0 && pos < n && (pass == 0 ? m.get(pos, a) : m.get(a, pos));
                        match = dark == (pat[k] == 1);
                    }
                    if (match) score += 40;
                }
            }
        }
    }
    // dark/light balance
    long dark = 0;
    for (auto v : m.modules) dark += v;
    long total = static_cast<long>(n) * n;
    long k = (std::labs(dark * 20 - total * 10) + total - 1) / total - 1;
    score += std::max(0L, k) * 10;
    return score;
}

}  // namespace

std::string_view ec_level_name(EcLevel level) noexcept {
    switch (level) {
        case EcLevel::L: return "L";
        case EcLevel::M: return "M";
        case EcLevel::Q: return "Q";
        case EcLevel::H: return "H";
    }
    return "?";
}

std::optional<EcLevel> parse_ec_level(std::string_view name) noexcept {
    if (name == "L" || name == "l") return EcLevel::L;
    if (name == "M" || name == "m") return EcLevel::M;
    if (name == "Q" || name == "q") return EcLevel::Q;
    if (name == "H" || name == "h") return EcLevel::H;
    return std::nullopt;
}

std::size_t capacity(int version, EcLevel level) {
    int bits = detail::data_codewords(version, level) * 8 - 4 - detail::char_count_bits(version);
    return static_cast<std::size_t>(std::max(0, bits / 8));
}

std::vector<BlockShape> block_layout(int version, EcLevel level) {
    const int blocks = detail::num_blocks(version, level);
    const int ec_len = detail::ec_codewords_per_block(version, level);
    const int raw = detail::raw_data_modules(version) / 8;
    const int short_blocks = blocks - raw % blocks;
    const int short_len = raw / blocks;
    std::vector<BlockShape> out;
    for (int i = 0; i < blocks; ++i) out.push_back({short_len - ec_len + (i < short_blocks ? 0 : 1), ec_len});
    return out;
}

int interleaved_position(int version, EcLevel level, int block, int index) {
    const int blocks = detail::num_blocks(version, level);
    const int ec_len = detail::ec_codewords_per_block(version, level);
    const int raw = detail::raw_data_modules(version) / 8;
    const int short_blocks = blocks - raw % blocks;
    const int short_len = raw / blocks;
    auto layout = block_layout(version, level);
    if (block < 0 || block >= blocks || index < 0 ||
        index >= layout[static_cast<std::size_t>(block)].data_codewords + ec_len)
        throw Error(Errc::invalid_argument, "codeword outside block");
    // padded index: short blocks have a placeholder before their EC codewords
    int padded = index;
    if (block < short_blocks && index >= short_len - ec_len) ++padded;
    int pos = 0;
    for (int i = 0; i <= short_len; ++i)
        for (int j = 0; j < blocks; ++j) {
            if (i == short_len - ec_len && j < short_blocks) continue;
            if (i == padded && j == block) return pos;
            ++pos;
        }
    throw Error(Errc::invalid_argument, "codeword outside block");
}

std::vector<std::array<std::pair<int, int>, 8>> codeword_modules(int version) {
    auto t = detail::make_template(version, EcLevel::M);
    auto order = detail::data_module_order(t);
    std::vector<std::array<std::pair<int, int>, 8>> out(order.size() / 8);
    for (std::size_t i = 0; i < out.size() * 8; ++i) out[i / 8][i % 8] = order[i];
    return out;
}

QrMatrix encode(ByteView payload, EcLevel level, std::optional<int> forced_mask) {
    if (forced_mask && (*forced_mask < 0 || *forced_mask > 7))
        throw Error(Errc::invalid_argument, "mask id outside 0..7");
    int version = 0;
    for (int v = kMinVersion; v <= kMaxVersion; ++v)
        if (payload.size() <= capacity(v, level)) {
            version = v;
            break;
        }
    if (version == 0)
        throw Error(Errc::payload_too_long, "payload of " + std::to_string(payload.size()) +
                                                " bytes exceeds the version-10 byte-mode capacity of " +
                                                std::to_string(capacity(kMaxVersion, level)) + " at EC level " +
                                                std::string(ec_level_name(level)));

    const std::size_t cap_bits = static_cast<std::size_t>(detail::data_codewords(version, level)) * 8;
    BitBuffer bb;
    bb.append(0x4, 4);
    bb.append(static_cast<std::uint32_t>(payload.size()), detail::char_count_bits(version));
    for (auto b : payload) bb.append(b, 8);
    bb.append(0, static_cast<int>(std::min<std::size_t>(4, cap_bits - bb.size())));
    bb.append(0, static_cast<int>((8 - bb.size() % 8) % 8));
    for (std::uint8_t pad = 0xEC; bb.size() < cap_bits; pad ^= 0xEC ^ 0x11) bb.append(pad, 8);

    Bytes codewords = add_ec_and_interleave(bb.to_bytes(), version, level);

    auto tmpl = detail::make_template(version, level);
    auto order = detail::data_module_order(tmpl);
    QrMatrix base = tmpl.matrix;
    for (std::size_t i = 0; i < order.size(); ++i) {
        bool bit = i < codewords.size() * 8 && ((codewords[i >> 3] >> (7 - (i & 7))) & 1);
        base.set(order[i].first, order[i].second, bit);
    }

    auto apply = [&](int mask) {
        QrMatrix m = base;
        for (auto [x, y] : order)
            if (detail::mask_bit(mask, x, y)) m.flip(x, y);
        detail::draw_format(m, level, mask);
        m.mask_id = mask;
        return m;
    };
    if (forced_mask) return apply(*forced_mask);
    QrMatrix best;
    long best_score = LONG_MAX;
    for (int mask = 0; mask < 8; ++mask) {
        QrMatrix m = apply(mask);
        long score = penalty(m);
        if (score < best_score) {
            best_score = score;
            best = std::move(m);
        }
    }
    return best;
}

}  // namespace phishlens::qr
