#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::container {

enum class ZipMethod : std::uint16_t { stored = 0, deflate = 8 };

struct ZipEntry {
    std::string name;
    std::uint16_t method = 0;  // raw method id; only stored/deflate are readable
    std::uint32_t compressed_size = 0;
    std::uint32_t uncompressed_size = 0;
    std::uint32_t crc32 = 0;
    std::uint32_t local_header_offset = 0;
};

/// Central-directory view of a ZIP archive. Holds a copy of the archive bytes.
class ZipArchive {
public:
    /// Throws Error(missing_eocd | truncated_entry | zip64_unsupported).
    static ZipArchive open(ByteView data);

    const std::vector<ZipEntry>& entries() const noexcept { return entries_; }

    /// Last central-directory record with this exact name.
    const ZipEntry* find(std::string_view name) const noexcept;
    bool contains(std::string_view name) const noexcept { return find(name) != nullptr; }

    /// Entry bytes, CRC-checked. Decompression stops at the declared size.
    /// Throws Error(entry_not_found | truncated_entry | crc_mismatch |
    /// unsupported_method | size_limit).
    Bytes read(std::string_view name) const;
    Bytes read(const ZipEntry& entry) const;

    /// Convenience: read() as text, or nullopt on any failure.
    std::optional<std::string> read_text(std::string_view name) const;

private:
    Bytes data_;
    std::vector<ZipEntry> entries_;
};

}  // namespace phishlens::container
