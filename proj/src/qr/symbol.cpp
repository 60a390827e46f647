#include "symbol.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "phishlens/error.hpp"

namespace phishlens::qr::detail {
namespace {

constexpr int kEcPerBlock[4][11] = {
    {-1, 7, 10, 15, 20, 26, 18, 20, 24, 30, 18},   // L
    {-1, 10, 16, 26, 18, 24, 16, 18, 22, 22, 26},  // M
    {-1, 13, 22, 18, 26, 18, 24, 18, 22, 20, 24},  // Q
    {-1, 17, 28, 22, 16, 22, 28, 26, 26, 24, 28},  // H
};
constexpr int kBlocks[4][11] = {
    {-1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 4},
    {-1, 1, 1, 1, 2, 2, 4, 4, 4, 5, 5},
    {-1, 1, 1, 2, 2, 4, 4, 6, 6, 8, 8},
    {-1, 1, 1, 2, 4, 4, 4, 5, 6, 8, 8},
};

void check_version(int version) {
    if (version < kMinVersion || version > kMaxVersion)
        throw Error(Errc::invalid_argument, "QR version " + std::to_string(version) + " outside 1..10");
}

struct Builder {
    Template t;
    void set(int x, int y, bool dark) {
        t.matrix.set(x, y, dark);
        t.is_function[static_cast<std::size_t>(y * t.matrix.size + x)] = 1;
    }
    void finder(int cx, int cy) {
        const int size = t.matrix.size;
        for (int dy = -4; dy <= 4; ++dy)
            for (int dx = -4; dx <= 4; ++dx) {
                int x = cx + dx, y = cy + dy;
                if (x < 0 || y < 0 || x >= size || y >= size) continue;
                int dist = std::max(std::abs(dx), std::abs(dy));
                set(x, y, dist != 2 && dist != 4);
            }
    }
    void alignment(int cx, int cy) {
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx) set(cx + dx, cy + dy, std::max(std::abs(dx), std::abs(dy)) != 1);
    }
};

}  // namespace

int ec_format_value(EcLevel level) {
    switch (level) {
        case EcLevel::L: return 1;
        case EcLevel::M: return 0;
        case EcLevel::Q: return 3;
        case EcLevel::H: return 2;
    }
    return 0;
}

int ec_codewords_per_block(int version, EcLevel level) {
    check_version(version);
    return kEcPerBlock[static_cast<int>(level)][version];
}

int num_blocks(int version, EcLevel level) {
    check_version(version);
    return kBlocks[static_cast<int>(level)][version];
}

int raw_data_modules(int version) {
    check_version(version);
    int result = (16 * version + 128) * version + 64;
    if (version >= 2) {
        int num_align = version / 7 + 2;
        result -= (25 * num_align - 10) * num_align - 55;
        if (version >= 7) result -= 36;
    }
    return result;
}

int data_codewords(int version, EcLevel level) {
    return raw_data_modules(version) / 8 - ec_codewords_per_block(version, level) * num_blocks(version, level);
}

int char_count_bits(int version) { return version < 10 ? 8 : 16; }

std::vector<int> alignment_positions(int version) {
    if (version == 1) return {};
    int num_align = version / 7 + 2;
    int size = 17 + 4 * version;
    int step = (version * 4 + num_align * 2 + 1) / (num_align * 2 - 2) * 2;
    std::vector<int> result = {6};
    for (int i = 0, pos = size - 7; i < num_align - 1; ++i, pos -= step) result.insert(result.begin() + 1, pos);
    return result;
}

int format_bits(EcLevel level, int mask) {
    int data = ec_format_value(level) << 3 | mask;
    int rem = data;
    for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
    return (data << 10 | rem) ^ 0x5412;
}

int version_bits(int version) {
    int rem = version;
    for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
    return version << 12 | rem;
}

bool mask_bit(int mask, int x, int y) {
    switch (mask) {
        case 0: return (x + y) % 2 == 0;
        case 1: return y % 2 == 0;
        case 2: return x % 3 == 0;
        case 3: return (x + y) % 3 == 0;
        case 4: return (x / 3 + y / 2) % 2 == 0;
        case 5: return x * y % 2 + x * y % 3 == 0;
        case 6: return (x * y % 2 + x * y % 3) % 2 == 0;
        case 7: return ((x + y) % 2 + x * y % 3) % 2 == 0;
        default: throw Error(Errc::invalid_argument, "mask id outside 0..7");
    }
}

Template make_template(int version, EcLevel level) {
    check_version(version);
    const int size = 17 + 4 * version;
    Builder b;
    b.t.matrix.version = version;
    b.t.matrix.size = size;
    b.t.matrix.ec_level = level;
    b.t.matrix.modules.assign(static_cast<std::size_t>(size * size), 0);
    b.t.is_function.assign(static_cast<std::size_t>(size * size), 0);

    for (int i = 0; i < size; ++i) {
        b.set(6, i, i % 2 == 0);
        b.set(i, 6, i % 2 == 0);
    }
    b.finder(3, 3);
    b.finder(size - 4, 3);
    b.finder(3, size - 4);

    auto align = alignment_positions(version);
    const int n = static_cast<int>(align.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if ((i == 0 && j == 0) || (i == 0 && j == n - 1) || (i == n - 1 && j == 0)) continue;
            b.alignment(align[static_cast<std::size_t>(i)], align[static_cast<std::size_t>(j)]);
        }

    // Reserve format areas (drawn later) and the dark module.
    for (int i = 0; i <= 8; ++i) {
        if (i != 6) {
            b.set(8, i, false);
            b.set(i, 8, false);
        }
    }
    for (int i = 0; i < 8; ++i) {
        b.set(size - 1 - i, 8, false);
        b.set(8, size - 1 - i, false);
    }
    b.set(8, size - 8, true);

    if (version >= 7) {
        int bits = version_bits(version);
        for (int i = 0; i < 18; ++i) {
            bool bit = (bits >> i) & 1;
            int a = size - 11 + i % 3, c = i / 3;
            b.set(a, c, bit);
            b.set(c, a, bit);
        }
    }
    return b.t;
}

std::vector<std::pair<int, int>> data_module_order(const Template& t) {
    std::vector<std::pair<int, int>> order;
    const int size = t.matrix.size;
    for (int right = size - 1; right >= 1; right -= 2) {
        if (right == 6) right = 5;
        for (int vert = 0; vert < size; ++vert) {
            for (int j = 0; j < 2; ++j) {
                int x = right - j;
                bool upward = ((right + 1) & 2) == 0;
                int y = upward ? size - 1 - vert : vert;
                if (!t.function(x, y)) order.emplace_back(x, y);
            }
        }
    }
    return order;
}

void draw_format(QrMatrix& m, EcLevel level, int mask) {
    const int bits = format_bits(level, mask);
    const int size = m.size;
    auto bit = [&](int i) { return ((bits >> i) & 1) != 0; };
    for (int i = 0; i <= 5; ++i) m.set(8, i, bit(i));
    m.set(8, 7, bit(6));
    m.set(8, 8, bit(7));
    m.set(7, 8, bit(8));
    for (int i = 9; i < 15; ++i) m.set(14 - i, 8, bit(i));
    for (int i = 0; i < 8; ++i) m.set(size - 1 - i, 8, bit(i));
    for (int i = 8; i < 15; ++i) m.set(8, size - 15 + i, bit(i));
    m.set(8, size - 8, true);
}

}  // namespace phishlens::qr::detail
