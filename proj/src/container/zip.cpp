#include "phishlens/container/zip.hpp"

#include <algorithm>

#include <zlib.h>

#include "phishlens/error.hpp"

namespace phishlens::container {
namespace {

constexpr std::uint32_t kEocdSig = 0x06054b50;
constexpr std::uint32_t kZip64LocatorSig = 0x07064b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::size_t kMaxEntryBytes = std::size_t{256} << 20;

Bytes inflate_raw(ByteView input, std::size_t expected) {
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw Error(Errc::unsupported_method, "zlib init failed");
    Bytes out;
    out.reserve(std::min<std::size_t>(expected, std::size_t{1} << 20));
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    std::uint8_t buf[65536];
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        const std::size_t produced = sizeof buf - zs.avail_out;
        if (out.size() + produced > expected) {
            inflateEnd(&zs);
            throw Error(Errc::size_limit, "inflated data exceeds declared size " + std::to_string(expected));
        }
        out.insert(out.end(), buf, buf + produced);
        if (rc == Z_STREAM_END) break;
        if (rc == Z_BUF_ERROR && zs.avail_in == 0) {
            inflateEnd(&zs);
            throw Error(Errc::truncated_entry, "deflate stream ends early");
        }
        if (rc != Z_OK && rc != Z_BUF_ERROR) {
            inflateEnd(&zs);
            throw Error(Errc::truncated_entry, std::string("corrupt deflate stream: ") + (zs.msg ? zs.msg : "?"));
        }
        if (rc == Z_BUF_ERROR && produced == 0) {
            inflateEnd(&zs);
            throw Error(Errc::truncated_entry, "deflate stream stalled");
        }
    }
    inflateEnd(&zs);
    return out;
}

}  // namespace

ZipArchive ZipArchive::open(ByteView data) {
    if (data.size() < 22) throw Error(Errc::missing_eocd, "input shorter than an end-of-central-directory record");
    std::size_t eocd = std::string_view::npos;
    const std::size_t lowest = data.size() > 22 + 0xFFFF ? data.size() - 22 - 0xFFFF : 0;
    for (std::size_t i = data.size() - 22 + 1; i-- > lowest;) {
        if (read_u32le(data, i) == kEocdSig) {
            eocd = i;
            break;
        }
    }
    if (eocd == std::string_view::npos) throw Error(Errc::missing_eocd, "no end-of-central-directory record");
    if (eocd >= 20 && read_u32le(data, eocd - 20) == kZip64LocatorSig)
        throw Error(Errc::zip64_unsupported, "ZIP64 archives are not supported");

    const std::size_t count = read_u16le(data, eocd + 10);
    const std::uint32_t cd_size = read_u32le(data, eocd + 12);
    const std::uint32_t cd_offset = read_u32le(data, eocd + 16);
    if (count == 0xFFFF || cd_offset == 0xFFFFFFFF || cd_size == 0xFFFFFFFF)
        throw Error(Errc::zip64_unsupported, "ZIP64 archives are not supported");
    if (static_cast<std::uint64_t>(cd_offset) + cd_size > eocd)
        throw Error(Errc::truncated_entry, "central directory extends past its end record");

    ZipArchive archive;
    archive.data_.assign(data.begin(), data.end());
    ByteView bytes = archive.data_;
    std::size_t off = cd_offset;
    archive.entries_.reserve(count);
    for (std::size_t e = 0; e < count; ++e) {
        if (off + 46 > bytes.size() || read_u32le(bytes, off) != kCentralSig)
            throw Error(Errc::truncated_entry, "central directory record " + std::to_string(e) + " is damaged");
        ZipEntry entry;
        entry.method = read_u16le(bytes, off + 10);
        entry.crc32 = read_u32le(bytes, off + 16);
        entry.compressed_size = read_u32le(bytes, off + 20);
        entry.uncompressed_size = read_u32le(bytes, off + 24);
        const std::size_t name_len = read_u16le(bytes, off + 28);
        const std::size_t extra = read_u16le(bytes, off + 30);
        const std::size_t comment = read_u16le(bytes, off + 32);
        entry.local_header_offset = read_u32le(bytes, off + 42);
        if (off + 46 + name_len > bytes.size())
            throw Error(Errc::truncated_entry, "central directory name runs past end of file");
        entry.name.assign(as_chars(bytes.subspan(off + 46, name_len)));
        if (entry.compressed_size == 0xFFFFFFFF || entry.uncompressed_size == 0xFFFFFFFF ||
            entry.local_header_offset == 0xFFFFFFFF)
            throw Error(Errc::zip64_unsupported, "ZIP64 entry '" + entry.name + "'");
        // general purpose flag bit 0: traditional encryption
        if (read_u16le(bytes, off + 8) & 1u) entry.method = 0xFFFF;
        archive.entries_.push_back(std::move(entry));
        off += 46 + name_len + extra + comment;
    }
    return archive;
}

const ZipEntry* ZipArchive::find(std::string_view name) const noexcept {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->name == name) return &*it;
    return nullptr;
}

Bytes ZipArchive::read(std::string_view name) const {
    const ZipEntry* e = find(name);
    if (!e) throw Error(Errc::entry_not_found, "no entry '" + std::string(name) + "'");
    return read(*e);
}

Bytes ZipArchive::read(const ZipEntry& entry) const {
    ByteView bytes = data_;
    const std::size_t off = entry.local_header_offset;
    if (off + 30 > bytes.size() || read_u32le(bytes, off) != kLocalSig)
        throw Error(Errc::truncated_entry, "local header of '" + entry.name + "' missing");
    const std::size_t start = off + 30 + read_u16le(bytes, off + 26) + read_u16le(bytes, off + 28);
    if (start > bytes.size() || entry.compressed_size > bytes.size() - start)
        throw Error(Errc::truncated_entry, "data of '" + entry.name + "' runs past end of file");
    if (entry.uncompressed_size > kMaxEntryBytes)
        throw Error(Errc::size_limit, "entry '" + entry.name + "' declares " + std::to_string(entry.uncompressed_size) +
                                          " bytes");
    ByteView payload = bytes.subspan(start, entry.compressed_size);

    Bytes out;
    if (entry.method == static_cast<std::uint16_t>(ZipMethod::stored)) {
        if (entry.compressed_size != entry.uncompressed_size)
            throw Error(Errc::truncated_entry, "stored entry '" + entry.name + "' has inconsistent sizes");
        out.assign(payload.begin(), payload.end());
    } else if (entry.method == static_cast<std::uint16_t>(ZipMethod::deflate)) {
        out = inflate_raw(payload, entry.uncompressed_size);
        if (out.size() != entry.uncompressed_size)
            throw Error(Errc::truncated_entry, "entry '" + entry.name + "' inflated to " + std::to_string(out.size()) +
                                                   " of " + std::to_string(entry.uncompressed_size) + " bytes");
    } else if (entry.method == 0xFFFF) {
        throw Error(Errc::unsupported_method, "entry '" + entry.name + "' is encrypted");
    } else {
        throw Error(Errc::unsupported_method,
                    "entry '" + entry.name + "' uses compression method " + std::to_string(entry.method));
    }
    const auto crc = static_cast<std::uint32_t>(::crc32(0L, out.data(), static_cast<uInt>(out.size())));
    if (crc != entry.crc32) throw Error(Errc::crc_mismatch, "entry '" + entry.name + "'");
    return out;
}

std::optional<std::string> ZipArchive::read_text(std::string_view name) const {
    try {
        Bytes b = read(name);
        return std::string(b.begin(), b.end());
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace phishlens::container
