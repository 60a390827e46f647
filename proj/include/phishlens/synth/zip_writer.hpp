#pragma once

#include <string>
#include <string_view>

#include "phishlens/bytes.hpp"

namespace phishlens::synth {

/// Deterministic ZIP writer (fixed 1980-01-01 timestamps, entries in insertion order).
class ZipWriter {
public:
    void add(std::string_view name, ByteView data, bool deflate = true);
    void add(std::string_view name, std::string_view text, bool deflate = true) { add(name, as_bytes(text), deflate); }
    Bytes finish() const;

private:
    struct Item {
        std::string name;
        Bytes payload;
        std::uint32_t crc = 0;
        std::uint32_t size = 0;
        std::uint16_t method = 0;
    };
    std::vector<Item> items_;
};

}  // namespace phishlens::synth
