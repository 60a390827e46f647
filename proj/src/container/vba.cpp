#include "phishlens/container/vba.hpp"

#include "phishlens/error.hpp"

namespace phishlens::container {
namespace {

constexpr std::size_t kChunkSize = 4096;

struct ModuleRecord {
    std::string name;
    std::string stream_name;
    std::uint32_t offset = 0;
};

std::vector<ModuleRecord> parse_dir_stream(ByteView dir, std::vector<std::string>& warnings) {
    std::vector<ModuleRecord> modules;
    ModuleRecord current;
    bool in_module = false;
    std::size_t pos = 0;
    while (pos + 6 <= dir.size()) {
        const std::uint16_t id = read_u16le(dir, pos);
        std::size_t size = read_u32le(dir, pos + 2);
        pos += 6;
        // PROJECTVERSION declares Reserved=4 but carries 6 bytes
        if (id == 0x0009) size = 6;
        if (size > dir.size() - pos) {
            warnings.push_back("VBA dir stream record 0x" + std::to_string(id) + " runs past end of stream");
            break;
        }
        ByteView data = dir.subspan(pos, size);
        switch (id) {
            case 0x0019:  // MODULENAME
                current = ModuleRecord{};
                current.name.assign(as_chars(data));
                in_module = true;
                break;
            case 0x001A:  // MODULESTREAMNAME
                current.stream_name.assign(as_chars(data));
                break;
            case 0x0031:  // MODULEOFFSET
                if (size >= 4) current.offset = read_u32le(data, 0);
                break;
            case 0x002B:  // module terminator
                if (in_module) modules.push_back(current);
                in_module = false;
                break;
            default:
                break;
        }
        pos += size;
    }
    return modules;
}

std::string normalize_newlines(ByteView bytes) {
    std::string out;
    out.reserve(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        char c = static_cast<char>(bytes[i]);
        if (c == '\r' && i + 1 < bytes.size() && bytes[i + 1] == '\n') continue;
        out += c;
    }
    return out;
}

}  // namespace

Bytes ovba_decompress(ByteView container) {
    if (container.empty() || container[0] != 0x01)
        throw Error(Errc::malformed_chunk, "compressed container signature byte is not 0x01");
    Bytes out;
    std::size_t pos = 1;
    while (pos < container.size()) {
        if (pos + 2 > container.size()) throw Error(Errc::malformed_chunk, "truncated chunk header");
        const std::uint16_t header = read_u16le(container, pos);
        const std::size_t chunk_size = (header & 0x0FFFu) + 3;
        if (((header >> 12) & 0x7u) != 0x3u) throw Error(Errc::malformed_chunk, "bad chunk signature");
        const bool compressed = (header & 0x8000u) != 0;
        const std::size_t chunk_end = std::min(container.size(), pos + chunk_size);
        pos += 2;
        const std::size_t chunk_start = out.size();
        if (!compressed) {
            if (chunk_end - pos < kChunkSize) throw Error(Errc::malformed_chunk, "raw chunk shorter than 4096 bytes");
            out.insert(out.end(), container.begin() + static_cast<std::ptrdiff_t>(pos),
                       container.begin() + static_cast<std::ptrdiff_t>(pos + kChunkSize));
            pos += kChunkSize;
            continue;
        }
        while (pos < chunk_end) {
            const std::uint8_t flags = container[pos++];
            for (int bit = 0; bit < 8 && pos < chunk_end; ++bit) {
                if ((flags & (1u << bit)) == 0) {
                    out.push_back(container[pos++]);
                } else {
                    if (pos + 2 > chunk_end) throw Error(Errc::malformed_chunk, "truncated copy token");
                    const std::uint16_t token = read_u16le(container, pos);
                    pos += 2;
                    const std::size_t difference = out.size() - chunk_start;
                    if (difference == 0) throw Error(Errc::malformed_chunk, "copy token at chunk start");
                    unsigned bit_count = 4;
                    while ((std::size_t{1} << bit_count) < difference) ++bit_count;
                    if (bit_count > 12) bit_count = 12;
                    const std::uint16_t length_mask = static_cast<std::uint16_t>(0xFFFFu >> bit_count);
                    const std::size_t length = (token & length_mask) + 3u;
                    const std::size_t offset = (static_cast<std::size_t>(token & ~length_mask) >> (16 - bit_count)) + 1;
                    if (offset > difference)
                        throw Error(Errc::malformed_chunk, "copy token reaches before chunk start");
                    const std::size_t src = out.size() - offset;
                    for (std::size_t k = 0; k < length; ++k) out.push_back(out[src + k]);
                }
                if (out.size() - chunk_start > kChunkSize)
                    throw Error(Errc::malformed_chunk, "chunk decompresses past 4096 bytes");
            }
        }
        pos = chunk_end;
    }
    return out;
}

VbaExtraction vba_extract(const CfbFile& file) {
    VbaExtraction result;
    const auto& dir = file.directory();

    // Every storage named "VBA" holding a "dir" stream is a project.
    for (std::uint32_t i = 0; i < dir.size(); ++i) {
        if (dir[i].type != CfbObjectType::storage || !iequals(dir[i].name, "VBA")) continue;
        auto kids = file.children(i);
        long dir_index = -1;
        for (auto k : kids)
            if (dir[k].type == CfbObjectType::stream && iequals(dir[k].name, "dir")) dir_index = static_cast<long>(k);
        if (dir_index < 0) continue;

        std::vector<ModuleRecord> records;
        try {
            Bytes raw = file.read_stream(static_cast<std::uint32_t>(dir_index));
            Bytes decoded = ovba_decompress(raw);
            records = parse_dir_stream(decoded, result.warnings);
        } catch (const Error& e) {
            result.warnings.push_back(std::string("VBA dir stream unreadable: ") + e.what());
            continue;
        }
        for (const auto& rec : records) {
            long stream_index = -1;
            for (auto k : kids)
                if (dir[k].type == CfbObjectType::stream && iequals(dir[k].name, rec.stream_name))
                    stream_index = static_cast<long>(k);
            if (stream_index < 0) {
                result.warnings.push_back("VBA module '" + rec.name + "' has no stream '" + rec.stream_name + "'");
                continue;
            }
            try {
                Bytes stream = file.read_stream(static_cast<std::uint32_t>(stream_index));
                if (rec.offset > stream.size())
                    throw Error(Errc::malformed_chunk, "source offset past end of module stream");
                Bytes source = ovba_decompress(ByteView(stream).subspan(rec.offset));
                result.modules.push_back({rec.name, normalize_newlines(source)});
            } catch (const Error& e) {
                result.warnings.push_back("VBA module '" + rec.name + "' skipped: " + e.what());
            }
        }
    }
    return result;
}

}  // namespace phishlens::container
