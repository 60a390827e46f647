#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::container {

enum class CfbObjectType : std::uint8_t { unknown = 0, storage = 1, stream = 2, root = 5 };

struct CfbDirEntry {
    std::string name;  // UTF-16LE name narrowed to ASCII ('?' for others)
    CfbObjectType type = CfbObjectType::unknown;
    std::uint32_t left = 0xFFFFFFFF;
    std::uint32_t right = 0xFFFFFFFF;
    std::uint32_t child = 0xFFFFFFFF;
    std::uint32_t start_sector = 0;
    std::uint64_t size = 0;
};

/// Read-only Compound File Binary reader. Stream paths use '/' separators and
/// compare case-insensitively ("VBA/dir").
class CfbFile {
public:
    /// Throws Error(bad_signature | sector_out_of_range | fat_cycle).
    static CfbFile open(ByteView data);

    std::uint32_t sector_size() const noexcept { return sector_size_; }
    const std::vector<CfbDirEntry>& directory() const noexcept { return dir_; }

    /// Directory index for a path, or -1.
    long find(std::string_view path) const;
    bool has_stream(std::string_view path) const;
    bool has_storage(std::string_view path) const;

    /// Child entries of a storage (by directory index).
    std::vector<std::uint32_t> children(std::uint32_t storage_index) const;

    /// Stream bytes truncated to the declared size. Throws Error(stream_not_found
    /// | fat_cycle | sector_out_of_range).
    Bytes read_stream(std::string_view path) const;
    Bytes read_stream(std::uint32_t dir_index) const;

private:
    Bytes chain(std::uint32_t start, std::uint64_t size, bool mini) const;
    std::vector<std::uint32_t> follow(const std::vector<std::uint32_t>& table, std::uint32_t start,
                                      std::size_t limit) const;

    Bytes data_;
    std::uint32_t sector_size_ = 512;
    std::uint32_t mini_sector_size_ = 64;
    std::uint32_t mini_cutoff_ = 4096;
    std::vector<std::uint32_t> fat_;
    std::vector<std::uint32_t> minifat_;
    Bytes ministream_;
    std::vector<CfbDirEntry> dir_;
};

}  // namespace phishlens::container
