#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "phishlens/error.hpp"
#include "phishlens/qr.hpp"
#include "phishlens/reed_solomon.hpp"
#include "symbol.hpp"

namespace phishlens::qr {
namespace {

struct Point {
    double x, y;
    double module;  // estimated module size in pixels
};

class Binary {
public:
    explicit Binary(const QrBitmap& b) : w(b.width), h(b.height), px(&b.pixels) {}
    bool dark(int x, int y) const {
        if (x < 0 || y < 0 || x >= w || y >= h) return false;
        return (*px)[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] < 128;
    }
    int w, h;

private:
    const Bytes* px;
};

bool ratio_ok(const int (&runs)[5]) {
    int total = 0;
    for (int r : runs) {
        if (r == 0) return false;
        total += r;
    }
    if (total < 7) return false;
    double unit = total / 7.0;
    double tol = unit / 2.0 + 0.5;
    return std::abs(runs[0] - unit) < tol && std::abs(runs[1] - unit) < tol && std::abs(runs[2] - 3 * unit) < 3 * tol &&
           std::abs(runs[3] - unit) < tol && std::abs(runs[4] - unit) < tol;
}

// Vertical 1:1:3:1:1 check through (x, cy); returns the refined center row.
std::optional<double> check_vertical(const Binary& img, int x, int cy, double expected_total) {
    if (!img.dark(x, cy)) return std::nullopt;
    int runs[5] = {0, 0, 0, 0, 0};
    int y = cy;
    while (y >= 0 && img.dark(x, y)) {
        ++runs[2];
        --y;
    }
    while (y >= 0 && !img.dark(x, y)) {
        ++runs[1];
        --y;
    }
    while (y >= 0 && img.dark(x, y)) {
        ++runs[0];
        --y;
    }
    int top = y + 1;
    y = cy + 1;
    while (y < img.h && img.dark(x, y)) {
        ++runs[2];
        ++y;
    }
    while (y < img.h && !img.dark(x, y)) {
        ++runs[3];
        ++y;
    }
    while (y < img.h && img.dark(x, y)) {
        ++runs[4];
        ++y;
    }
    if (!ratio_ok(runs)) return std::nullopt;
    int total = runs[0] + runs[1] + runs[2] + runs[3] + runs[4];
    if (std::abs(total - expected_total) > expected_total / 2) return std::nullopt;
    return top + runs[0] + runs[1] + runs[2] / 2.0;
}

std::vector<Point> find_finders(const Binary& img) {
    std::vector<Point> centers;
    std::vector<int> weight;
    for (int y = 0; y < img.h; ++y) {
        int runs[5] = {0, 0, 0, 0, 0};
        int state = 0;
        bool prev_dark = false;
        int run_start = 0;
        auto consider = [&](int end_x) {
            if (!ratio_ok(runs)) return;
            int total = runs[0] + runs[1] + runs[2] + runs[3] + runs[4];
            double cx = end_x - runs[4] - runs[3] - runs[2] / 2.0;
            auto cy = check_vertical(img, static_cast<int>(cx), y, total);
            if (!cy) return;
            double module = total / 7.0;
            for (std::size_t i = 0; i < centers.size(); ++i) {
                if (std::abs(centers[i].x - cx) <= module * 1.5 && std::abs(centers[i].y - *cy) <= module * 1.5) {
                    int n = weight[i];
                    centers[i].x = (centers[i].x * n + cx) / (n + 1);
                    centers[i].y = (centers[i].y * n + *cy) / (n + 1);
                    centers[i].module = (centers[i].module * n + module) / (n + 1);
                    ++weight[i];
                    return;
                }
            }
            centers.push_back({cx, *cy, module});
            weight.push_back(1);
        };
        for (int x = 0; x <= img.w; ++x) {
            bool d = x < img.w && img.dark(x, y);
            if (x == 0) {
                prev_dark = d;
                run_start = 0;
                continue;
            }
            if (d == prev_dark && x < img.w) continue;
            int len = x - run_start;
            if (prev_dark) {
                if (state == 0 || state == 2 || state == 4) {
                    runs[state] = len;
                    if (state == 4) {
                        consider(x);
                        // shift by two runs: keep the last dark-light pair as a potential start
                        runs[0] = runs[2];
                        runs[1] = runs[3];
                        runs[2] = runs[4];
                        runs[3] = runs[4] = 0;
                        state = 3;
                    } else {
                        ++state;
                    }
                }
            } else if (state == 1 || state == 3) {
                runs[state] = len;
                ++state;
            }
            // a light run before any dark run is ignored (state 0)
            prev_dark = d;
            run_start = x;
        }
    }
    // keep candidates confirmed on several rows
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < centers.size(); ++i)
        if (weight[i] >= 2) idx.push_back(i);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
    std::vector<Point> strong;
    for (auto i : idx) strong.push_back(centers[i]);
    return strong;
}

int hamming15(int a, int b) { return std::popcount(static_cast<unsigned>(a ^ b) & 0x7FFFu); }

}  // namespace

DecodeResult decode_matrix(const QrMatrix& grid) {
    const int size = grid.size;
    if ((size - 17) % 4 != 0 || size < 21 || size > 17 + 4 * kMaxVersion)
        throw Error(Errc::format_unrecoverable, "symbol size " + std::to_string(size) + " is not a version 1-10 QR");
    const int version = (size - 17) / 4;

    // Format word from both copies.
    int copy1 = 0, copy2 = 0;
    for (int i = 0; i <= 5; ++i) copy1 |= grid.get(8, i) << i;
    copy1 |= grid.get(8, 7) << 6;
    copy1 |= grid.get(8, 8) << 7;
    copy1 |= grid.get(7, 8) << 8;
    for (int i = 9; i < 15; ++i) copy1 |= grid.get(14 - i, 8) << i;
    for (int i = 0; i < 8; ++i) copy2 |= grid.get(size - 1 - i, 8) << i;
    for (int i = 8; i < 15; ++i) copy2 |= grid.get(8, size - 15 + i) << i;

    int best_dist = 99;
    EcLevel level = EcLevel::M;
    int mask = 0;
    for (EcLevel l : {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H})
        for (int mk = 0; mk < 8; ++mk) {
            int word = detail::format_bits(l, mk);
            int d = std::min(hamming15(word, copy1), hamming15(word, copy2));
            if (d < best_dist) {
                best_dist = d;
                level = l;
                mask = mk;
            }
        }
    if (best_dist > 3) throw Error(Errc::format_unrecoverable, "format information beyond BCH correction");

    auto tmpl = detail::make_template(version, level);
    auto order = detail::data_module_order(tmpl);
    const std::size_t total_codewords = static_cast<std::size_t>(detail::raw_data_modules(version) / 8);
    Bytes stream(total_codewords, 0);
    for (std::size_t i = 0; i < total_codewords * 8; ++i) {
        auto [x, y] = order[i];
        bool bit = grid.get(x, y) != detail::mask_bit(mask, x, y);
        if (bit) stream[i >> 3] |= static_cast<std::uint8_t>(0x80 >> (i & 7));
    }

    auto layout = block_layout(version, level);
    DecodeResult result;
    result.version = version;
    result.ec_level = level;
    result.mask_id = mask;
    Bytes data;
    for (std::size_t b = 0; b < layout.size(); ++b) {
        const int len = layout[b].data_codewords + layout[b].ec_codewords;
        Bytes block(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i)
            block[static_cast<std::size_t>(i)] =
                stream[static_cast<std::size_t>(interleaved_position(version, level, static_cast<int>(b), i))];
        try {
            result.corrected_codewords += rs::decode(block, layout[b].ec_codewords);
        } catch (const Error& e) {
            throw Error(Errc::rs_failure, "block " + std::to_string(b) + ": " + e.what());
        }
        data.insert(data.end(), block.begin(), block.begin() + layout[b].data_codewords);
    }

    // Segment parsing: byte mode only.
    std::size_t bit = 0;
    const std::size_t nbits = data.size() * 8;
    auto read = [&](int n) {
        std::uint32_t v = 0;
        for (int i = 0; i < n; ++i, ++bit) v = v << 1 | ((data[bit >> 3] >> (7 - (bit & 7))) & 1);
        return v;
    };
    while (bit + 4 <= nbits) {
        std::uint32_t mode = read(4);
        if (mode == 0) break;
        if (mode != 0x4) throw Error(Errc::unsupported_mode, "segment mode " + std::to_string(mode) + " is not byte mode");
        const int cc_bits = detail::char_count_bits(version);
        if (bit + static_cast<std::size_t>(cc_bits) > nbits) throw Error(Errc::rs_failure, "truncated segment header");
        std::uint32_t count = read(cc_bits);
        if (bit + static_cast<std::size_t>(count) * 8 > nbits) throw Error(Errc::rs_failure, "segment longer than symbol");
        for (std::uint32_t i = 0; i < count; ++i) result.payload.push_back(static_cast<std::uint8_t>(read(8)));
    }
    return result;
}

DecodeResult decode_detailed(const QrBitmap& bitmap) {
    if (bitmap.width <= 0 || bitmap.height <= 0 ||
        bitmap.pixels.size() != static_cast<std::size_t>(bitmap.width) * static_cast<std::size_t>(bitmap.height))
        throw Error(Errc::no_finder_patterns, "empty or inconsistent bitmap");
    Binary img(bitmap);
    auto finders = find_finders(img);
    if (finders.size() < 3) throw Error(Errc::no_finder_patterns, "found " + std::to_string(finders.size()) + " finder pattern(s)");

    // Choose the triple forming the best right angle with similar module sizes.
    double best = 1e18;
    Point tl{}, tr{}, bl{};
    const std::size_t n = std::min<std::size_t>(finders.size(), 12);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                const Point &p = finders[a], &q = finders[b], &r = finders[c];
                // p top-left, q to its right, r below it
                double dx1 = q.x - p.x, dy1 = q.y - p.y, dx2 = r.x - p.x, dy2 = r.y - p.y;
                if (dx1 <= 0 || dy2 <= 0) continue;
                double l1 = std::hypot(dx1, dy1), l2 = std::hypot(dx2, dy2);
                double cosang = std::abs(dx1 * dx2 + dy1 * dy2) / (l1 * l2);
                double score = cosang + std::abs(l1 - l2) / std::max(l1, l2) +
                               std::abs(p.module - q.module) / p.module + std::abs(p.module - r.module) / p.module;
                if (score < best) {
                    best = score;
                    tl = p;
                    tr = q;
                    bl = r;
                }
            }
    if (best > 0.5) throw Error(Errc::no_finder_patterns, "finder patterns do not form a symbol");

    double module = (tl.module + tr.module + bl.module) / 3.0;
    double span = (std::hypot(tr.x - tl.x, tr.y - tl.y) + std::hypot(bl.x - tl.x, bl.y - tl.y)) / 2.0;
    int size = static_cast<int>(std::lround(span / module)) + 7;
    // snap to 4k+1
    size = ((size - 17 + 2) / 4) * 4 + 17;
    if (size < 21 || size > 17 + 4 * kMaxVersion)
        throw Error(Errc::format_unrecoverable, "estimated symbol size " + std::to_string(size) + " outside versions 1-10");

    QrMatrix grid;
    grid.size = size;
    grid.version = (size - 17) / 4;
    grid.modules.assign(static_cast<std::size_t>(size * size), 0);
    const double step = size > 7 ? 1.0 / (size - 7) : 0;
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            double u = (c - 3) * step, v = (r - 3) * step;
            double x = tl.x + u * (tr.x - tl.x) + v * (bl.x - tl.x);
            double y = tl.y + u * (tr.y - tl.y) + v * (bl.y - tl.y);
            grid.set(c, r, img.dark(static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))));
        }
    return decode_matrix(grid);
}

Bytes decode(const QrBitmap& bitmap) { return decode_detailed(bitmap).payload; }

}  // namespace phishlens::qr
