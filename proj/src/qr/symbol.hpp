#pragma once

// Symbol geometry shared by the encoder and decoder.

#include <utility>
#include <vector>

#include "phishlens/qr.hpp"

namespace phishlens::qr::detail {

int ec_codewords_per_block(int version, EcLevel level);
int num_blocks(int version, EcLevel level);
int raw_data_modules(int version);
int data_codewords(int version, EcLevel level);
int char_count_bits(int version);
std::vector<int> alignment_positions(int version);

/// 15-bit BCH-protected, XOR-masked format word.
int format_bits(EcLevel level, int mask);
/// 18-bit version word (versions >= 7).
int version_bits(int version);
int ec_format_value(EcLevel level);

bool mask_bit(int mask, int x, int y);

/// Matrix with all function patterns drawn (format area left light) plus a
/// parallel flag grid marking function modules.
struct Template {
    QrMatrix matrix;
    std::vector<std::uint8_t> is_function;
    bool function(int x, int y) const { return is_function[static_cast<std::size_t>(y * matrix.size + x)] != 0; }
};
Template make_template(int version, EcLevel level);

/// Non-function modules in zigzag placement order.
std::vector<std::pair<int, int>> data_module_order(const Template& t);

void draw_format(QrMatrix& m, EcLevel level, int mask);

}  // namespace phishlens::qr::detail
