#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phishlens {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) noexcept {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string_view as_chars(ByteView b) noexcept {
    return {reinterpret_cast<const char*>(b.data()), b.size()};
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

/// Shannon entropy in bits per byte over the 256-symbol histogram. Empty input is 0.
double shannon_entropy(ByteView data) noexcept;
inline double shannon_entropy(std::string_view data) noexcept { return shannon_entropy(as_bytes(data)); }

/// Non-overlapping left-to-right occurrences of `pattern` in `data`.
/// Throws Error(invalid_argument) when the pattern is empty.
std::size_t count_pattern(ByteView data, ByteView pattern, bool case_insensitive);
inline std::size_t count_pattern(std::string_view data, std::string_view pattern, bool case_insensitive) {
    return count_pattern(as_bytes(data), as_bytes(pattern), case_insensitive);
}

constexpr char ascii_lower(char c) noexcept { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c; }
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool istarts_with(std::string_view s, std::string_view prefix) noexcept;
bool iends_with(std::string_view s, std::string_view suffix) noexcept;
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0) noexcept;
std::string_view trim(std::string_view s) noexcept;

// Little-endian readers. Callers bounds-check before use.
inline std::uint16_t read_u16le(ByteView b, std::size_t off) noexcept {
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}
inline std::uint32_t read_u32le(ByteView b, std::size_t off) noexcept {
    return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
           (static_cast<std::uint32_t>(b[off + 2]) << 16) | (static_cast<std::uint32_t>(b[off + 3]) << 24);
}
inline std::uint64_t read_u64le(ByteView b, std::size_t off) noexcept {
    return static_cast<std::uint64_t>(read_u32le(b, off)) | (static_cast<std::uint64_t>(read_u32le(b, off + 4)) << 32);
}

}  // namespace phishlens
