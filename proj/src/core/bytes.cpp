#include "phishlens/bytes.hpp"

#include <array>
#include <cmath>

#include "phishlens/error.hpp"

namespace phishlens {

double shannon_entropy(ByteView data) noexcept {
    if (data.empty()) return 0.0;
    std::array<std::size_t, 256> histogram{};
    for (std::uint8_t b : data) ++histogram[b];
    const double n = static_cast<double>(data.size());
    double h = 0.0;
    for (std::size_t count : histogram) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    // -0.0 for single-symbol input
    return h <= 0.0 ? 0.0 : h;
}

std::size_t count_pattern(ByteView data, ByteView pattern, bool case_insensitive) {
    if (pattern.empty()) throw Error(Errc::invalid_argument, "count_pattern: empty pattern");
    if (data.size() < pattern.size()) return 0;
    auto fold = [case_insensitive](std::uint8_t c) -> std::uint8_t {
        return case_insensitive ? static_cast<std::uint8_t>(ascii_lower(static_cast<char>(c))) : c;
    };
    const std::uint8_t first = fold(pattern[0]);
    std::size_t count = 0;
    std::size_t i = 0;
    const std::size_t last = data.size() - pattern.size();
    while (i <= last) {
        if (fold(data[i]) == first) {
            std::size_t j = 1;
            while (j < pattern.size() && fold(data[i + j]) == fold(pattern[j])) ++j;
            if (j == pattern.size()) {
                ++count;
                i += pattern.size();
                continue;
            }
        }
        ++i;
    }
    return count;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = ascii_lower(c);
    return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (ascii_lower(a[i]) != ascii_lower(b[i])) return false;
    return true;
}

bool istarts_with(std::string_view s, std::string_view prefix) noexcept {
    return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

bool iends_with(std::string_view s, std::string_view suffix) noexcept {
    return s.size() >= suffix.size() && iequals(s.substr(s.size() - suffix.size()), suffix);
}

std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from) noexcept {
    if (needle.empty()) return from <= haystack.size() ? from : std::string_view::npos;
    if (haystack.size() < needle.size()) return std::string_view::npos;
    for (std::size_t i = from; i + needle.size() <= haystack.size(); ++i) {
        if (ascii_lower(haystack[i]) != ascii_lower(needle[0])) continue;
        if (iequals(haystack.substr(i, needle.size()), needle)) return i;
    }
    return std::string_view::npos;
}

std::string_view trim(std::string_view s) noexcept {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

}  // namespace phishlens
