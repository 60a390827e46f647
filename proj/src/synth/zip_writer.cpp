#include "phishlens/synth/zip_writer.hpp"

#include <zlib.h>

#include "phishlens/error.hpp"

namespace phishlens::synth {
namespace {

void put16(Bytes& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(Bytes& out, std::uint32_t v) {
    put16(out, v & 0xFFFF);
    put16(out, v >> 16);
}

Bytes deflate_raw(ByteView data) {
    z_stream zs{};
    if (deflateInit2(&zs, 6, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK)
        throw Error(Errc::io_error, "zlib deflateInit2 failed");
    Bytes out(deflateBound(&zs, static_cast<uLong>(data.size())));
    zs.next_in = const_cast<Bytef*>(data.data());
    zs.avail_in = static_cast<uInt>(data.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    out.resize(zs.total_out);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(Errc::io_error, "zlib deflate failed");
    return out;
}

// 1980-01-01 00:00
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (0 << 9) | (1 << 5) | 1;

}  // namespace

void ZipWriter::add(std::string_view name, ByteView data, bool deflate) {
    Item item;
    item.name = std::string(name);
    item.size = static_cast<std::uint32_t>(data.size());
    item.crc = static_cast<std::uint32_t>(::crc32(0L, data.data(), static_cast<uInt>(data.size())));
    if (deflate) {
        item.payload = deflate_raw(data);
        item.method = 8;
    } else {
        item.payload.assign(data.begin(), data.end());
        item.method = 0;
    }
    items_.push_back(std::move(item));
}

Bytes ZipWriter::finish() const {
    Bytes out;
    std::vector<std::uint32_t> offsets;
    for (const auto& it : items_) {
        offsets.push_back(static_cast<std::uint32_t>(out.size()));
        put32(out, 0x04034b50);
        put16(out, 20);
        put16(out, 0);
        put16(out, it.method);
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, it.crc);
        put32(out, static_cast<std::uint32_t>(it.payload.size()));
        put32(out, it.size);
        put16(out, static_cast<std::uint32_t>(it.name.size()));
        put16(out, 0);
        out.insert(out.end(), it.name.begin(), it.name.end());
        out.insert(out.end(), it.payload.begin(), it.payload.end());
    }
    const auto cd_start = static_cast<std::uint32_t>(out.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto& it = items_[i];
        put32(out, 0x02014b50);
        put16(out, 20);
        put16(out, 20);
        put16(out, 0);
        put16(out, it.method);
        put16(out, kDosTime);
        put16(out, kDosDate);
        put32(out, it.crc);
        put32(out, static_cast<std::uint32_t>(it.payload.size()));
        put32(out, it.size);
        put16(out, static_cast<std::uint32_t>(it.name.size()));
        put16(out, 0);
        put16(out, 0);
        put16(out, 0);
        put16(out, 0);
        put32(out, 0);
        put32(out, offsets[i]);
        out.insert(out.end(), it.name.begin(), it.name.end());
    }
    const auto cd_size = static_cast<std::uint32_t>(out.size()) - cd_start;
    put32(out, 0x06054b50);
    put16(out, 0);
    put16(out, 0);
    put16(out, static_cast<std::uint32_t>(items_.size()));
    put16(out, static_cast<std::uint32_t>(items_.size()));
    put32(out, cd_size);
    put32(out, cd_start);
    put16(out, 0);
    return out;
}

}  // namespace phishlens::synth
