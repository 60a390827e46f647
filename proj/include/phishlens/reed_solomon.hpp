#pragma once

#include <cstdint>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::rs {

/// GF(256) arithmetic over the QR field polynomial x^8+x^4+x^3+x^2+1 (0x11D).
std::uint8_t gf_mul(std::uint8_t a, std::uint8_t b) noexcept;
std::uint8_t gf_exp(int power) noexcept;  // alpha^power
int gf_log(std::uint8_t value) noexcept;  // undefined for 0

/// Generator polynomial of degree `ec_len`, roots alpha^0..alpha^(ec_len-1).
/// Coefficients from highest degree down, leading 1 omitted.
std::vector<std::uint8_t> generator(int ec_len);

/// Remainder codewords appended after `data`.
Bytes encode(ByteView data, int ec_len);

/// Corrects `block` (data followed by `ec_len` EC codewords) in place and
/// returns the number of corrected symbols. Throws Error(rs_failure) when the
/// errors exceed the correction capacity and are detected.
int decode(Bytes& block, int ec_len);

}  // namespace phishlens::rs
