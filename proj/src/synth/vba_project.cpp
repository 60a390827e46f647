#include "phishlens/synth/vba_project.hpp"

#include "phishlens/synth/cfb_writer.hpp"

namespace phishlens::synth {
namespace {

void put16(Bytes& b, std::uint32_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(Bytes& b, std::uint32_t v) {
    put16(b, v & 0xFFFF);
    put16(b, v >> 16);
}

void record(Bytes& b, std::uint16_t id, ByteView data) {
    put16(b, id);
    put32(b, static_cast<std::uint32_t>(data.size()));
    b.insert(b.end(), data.begin(), data.end());
}
void record(Bytes& b, std::uint16_t id, std::string_view text) { record(b, id, as_bytes(text)); }
void record_u32(Bytes& b, std::uint16_t id, std::uint32_t v) {
    Bytes d;
    put32(d, v);
    record(b, id, d);
}
void record_u16(Bytes& b, std::uint16_t id, std::uint16_t v) {
    Bytes d;
    put16(d, v);
    record(b, id, d);
}

Bytes utf16(std::string_view s) {
    Bytes out;
    for (char c : s) put16(out, static_cast<unsigned char>(c));
    return out;
}

std::string to_crlf(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '\n') out += '\r';
        out += c;
    }
    return out;
}

}  // namespace

Bytes ovba_compress_literal(ByteView data) {
    // Full 4096-byte blocks become raw chunks; a tail becomes literal-token
    // chunks, each kept under the 4098-byte compressed chunk limit.
    constexpr std::size_t kMaxLiteralRun = 3640;
    Bytes out{0x01};
    std::size_t pos = 0;
    while (pos < data.size()) {
        const std::size_t remaining = data.size() - pos;
        if (remaining >= 4096) {
            put16(out, 0x3000u | 4095u);
            out.insert(out.end(), data.begin() + static_cast<std::ptrdiff_t>(pos),
                       data.begin() + static_cast<std::ptrdiff_t>(pos + 4096));
            pos += 4096;
            continue;
        }
        const std::size_t n = std::min(kMaxLiteralRun, remaining);
        Bytes chunk;
        for (std::size_t i = 0; i < n; i += 8) {
            chunk.push_back(0x00);  // eight literal tokens
            for (std::size_t k = i; k < std::min(n, i + 8); ++k) chunk.push_back(data[pos + k]);
        }
        put16(out, 0x8000u | 0x3000u | ((chunk.size() + 2 - 3) & 0x0FFFu));
        out.insert(out.end(), chunk.begin(), chunk.end());
        pos += n;
    }
    return out;
}

Bytes build_vba_project(const std::vector<VbaModuleSource>& modules) {
    Bytes dir;
    record_u32(dir, 0x0001, 1);       // PROJECTSYSKIND win32
    record_u32(dir, 0x0002, 0x0409);  // PROJECTLCID
    record_u32(dir, 0x0014, 0x0409);  // PROJECTLCIDINVOKE
    record_u16(dir, 0x0003, 1252);    // PROJECTCODEPAGE
    record(dir, 0x0004, "VBAProject");
    record(dir, 0x0005, "");
    record(dir, 0x0040, "");
    record(dir, 0x0006, "");
    record(dir, 0x003D, "");
    record_u32(dir, 0x0007, 0);
    record_u32(dir, 0x0008, 0);
    // PROJECTVERSION: Reserved(4) = 4, then major u32 + minor u16
    put16(dir, 0x0009);
    put32(dir, 4);
    put32(dir, 1);
    put16(dir, 0);
    record(dir, 0x000C, "");
    record(dir, 0x003C, "");
    record_u16(dir, 0x000F, static_cast<std::uint16_t>(modules.size()));
    record_u16(dir, 0x0013, 0xFFFF);

    CfbWriter cfb;
    constexpr std::size_t kCacheStub = 16;
    std::string project_text = "ID=\"{00000000-0000-0000-0000-000000000000}\"\r\n";
    for (const auto& m : modules) {
        record(dir, 0x0019, m.name);
        record(dir, 0x0047, utf16(m.name));
        record(dir, 0x001A, m.name);
        record(dir, 0x0032, utf16(m.name));
        record(dir, 0x001C, "");
        record(dir, 0x0048, "");
        record_u32(dir, 0x0031, kCacheStub);
        record_u32(dir, 0x001E, 0);
        record_u16(dir, 0x002C, 0xFFFF);
        record(dir, 0x0021, "");
        record(dir, 0x002B, "");

        Bytes stream(kCacheStub, 0);
        Bytes compressed = ovba_compress_literal(as_bytes(to_crlf(m.source)));
        stream.insert(stream.end(), compressed.begin(), compressed.end());
        cfb.add_stream("VBA/" + m.name, stream);
        project_text += "Module=" + m.name + "\r\n";
    }
    record(dir, 0x0010, "");
    project_text += "Name=\"VBAProject\"\r\n";

    cfb.add_stream("VBA/dir", ovba_compress_literal(dir));
    const Bytes vba_project_stream{0xCC, 0x61, 0xFF, 0xFF, 0x00, 0x00, 0x00};
    cfb.add_stream("VBA/_VBA_PROJECT", vba_project_stream);
    cfb.add_stream("PROJECT", as_bytes(project_text));
    return cfb.finish();
}

}  // namespace phishlens::synth
