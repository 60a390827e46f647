#include "phishlens/synth/cfb_writer.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "phishlens/error.hpp"

namespace phishlens::synth {
namespace {

constexpr std::uint32_t kSector = 512;
constexpr std::uint32_t kMini = 64;
constexpr std::uint32_t kCutoff = 4096;
constexpr std::uint32_t kEnd = 0xFFFFFFFE;
constexpr std::uint32_t kFree = 0xFFFFFFFF;
constexpr std::uint32_t kFatSect = 0xFFFFFFFD;
constexpr std::uint32_t kNone = 0xFFFFFFFF;

void put16(Bytes& b, std::size_t off, std::uint32_t v) {
    b[off] = static_cast<std::uint8_t>(v);
    b[off + 1] = static_cast<std::uint8_t>(v >> 8);
}
void put32(Bytes& b, std::size_t off, std::uint32_t v) {
    put16(b, off, v & 0xFFFF);
    put16(b, off + 2, v >> 16);
}

struct Node {
    std::string name;
    int type = 2;  // 1 storage, 2 stream, 5 root
    const Bytes* data = nullptr;
    std::vector<std::size_t> kids;
    std::uint32_t left = kNone, right = kNone, child = kNone;
    std::uint32_t start = kEnd;
    std::uint32_t size = 0;
};

// CFB sibling order: shorter names first, then case-insensitive compare.
bool name_less(const std::string& a, const std::string& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        char x = static_cast<char>(std::toupper(static_cast<unsigned char>(a[i])));
        char y = static_cast<char>(std::toupper(static_cast<unsigned char>(b[i])));
        if (x != y) return x < y;
    }
    return false;
}

std::size_t sectors_for(std::size_t bytes, std::size_t unit) { return (bytes + unit - 1) / unit; }

}  // namespace

void CfbWriter::add_stream(std::string_view path, ByteView data) {
    if (path.empty() || path.front() == '/' || path.back() == '/')
        throw Error(Errc::invalid_argument, "bad stream path '" + std::string(path) + "'");
    streams_[std::string(path)] = Bytes(data.begin(), data.end());
}

Bytes CfbWriter::finish() const {
    std::vector<Node> nodes;
    nodes.push_back(Node{"Root Entry", 5});
    auto child_named = [&](std::size_t parent, const std::string& name) -> std::size_t {
        for (auto k : nodes[parent].kids)
            if (nodes[k].name == name) return k;
        return SIZE_MAX;
    };
    for (const auto& [path, data] : streams_) {
        std::size_t parent = 0;
        std::size_t start = 0;
        while (true) {
            auto slash = path.find('/', start);
            std::string part = path.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
            if (part.size() > 31) throw Error(Errc::invalid_argument, "CFB name longer than 31 characters");
            std::size_t existing = child_named(parent, part);
            if (slash == std::string::npos) {
                if (existing != SIZE_MAX) throw Error(Errc::invalid_argument, "duplicate CFB path " + path);
                Node n{part, 2};
                n.data = &data;
                n.size = static_cast<std::uint32_t>(data.size());
                nodes.push_back(std::move(n));
                nodes[parent].kids.push_back(nodes.size() - 1);
                break;
            }
            if (existing == SIZE_MAX) {
                nodes.push_back(Node{part, 1});
                nodes[parent].kids.push_back(nodes.size() - 1);
                existing = nodes.size() - 1;
            }
            parent = existing;
            start = slash + 1;
        }
    }
    // Siblings as a right-leaning chain in sorted order.
    for (auto& n : nodes) {
        auto kids = n.kids;
        std::sort(kids.begin(), kids.end(), [&](std::size_t a, std::size_t b) { return name_less(nodes[a].name, nodes[b].name); });
        if (kids.empty()) continue;
        n.child = static_cast<std::uint32_t>(kids[0]);
        for (std::size_t i = 0; i + 1 < kids.size(); ++i) nodes[kids[i]].right = static_cast<std::uint32_t>(kids[i + 1]);
    }

    // Mini stream layout.
    Bytes ministream;
    std::vector<std::uint32_t> minifat;
    for (auto& n : nodes) {
        if (n.type != 2 || n.size == 0 || n.size >= kCutoff) continue;
        const auto first = static_cast<std::uint32_t>(ministream.size() / kMini);
        const std::size_t count = sectors_for(n.size, kMini);
        for (std::size_t i = 0; i < count; ++i)
            minifat.push_back(i + 1 == count ? kEnd : first + static_cast<std::uint32_t>(i) + 1);
        ministream.insert(ministream.end(), n.data->begin(), n.data->end());
        ministream.resize(ministream.size() + (count * kMini - n.size), 0);
        n.start = first;
    }

    const std::size_t dir_sectors = sectors_for(nodes.size() * 128, kSector);
    const std::size_t minifat_sectors = sectors_for(minifat.size() * 4, kSector);
    const std::size_t ministream_sectors = sectors_for(ministream.size(), kSector);
    std::size_t regular_sectors = 0;
    for (const auto& n : nodes)
        if (n.type == 2 && n.size >= kCutoff) regular_sectors += sectors_for(n.size, kSector);
    const std::size_t payload = dir_sectors + minifat_sectors + ministream_sectors + regular_sectors;
    std::size_t fat_sectors = 1;
    while (fat_sectors * (kSector / 4) < payload + fat_sectors) ++fat_sectors;
    if (fat_sectors > 109) throw Error(Errc::invalid_argument, "compound file too large for header DIFAT");

    const std::size_t total = fat_sectors + payload;
    std::vector<std::uint32_t> fat(fat_sectors * (kSector / 4), kFree);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < fat_sectors; ++i) fat[next++] = kFatSect;
    auto alloc_chain = [&](std::size_t count) -> std::uint32_t {
        if (count == 0) return kEnd;
        const std::uint32_t first = next;
        for (std::size_t i = 0; i < count; ++i) {
            fat[next] = (i + 1 == count) ? kEnd : next + 1;
            ++next;
        }
        return first;
    };
    const std::uint32_t dir_start = alloc_chain(dir_sectors);
    const std::uint32_t minifat_start = alloc_chain(minifat_sectors);
    const std::uint32_t ministream_start = alloc_chain(ministream_sectors);
    nodes[0].start = ministream.empty() ? kEnd : ministream_start;
    nodes[0].size = static_cast<std::uint32_t>(ministream.size());
    for (auto& n : nodes) {
        if (n.type == 2 && n.size >= kCutoff) n.start = alloc_chain(sectors_for(n.size, kSector));
        if (n.type == 2 && n.size == 0) n.start = kEnd;
    }

    Bytes out((total + 1) * kSector, 0);
    // Header
    const std::uint8_t sig[8] = {0xD0, 0xCF, 0x11, 0xE0, 0xA1, 0xB1, 0x1A, 0xE1};
    std::copy(sig, sig + 8, out.begin());
    put16(out, 0x18, 0x003E);
    put16(out, 0x1A, 0x0003);
    put16(out, 0x1C, 0xFFFE);
    put16(out, 0x1E, 9);
    put16(out, 0x20, 6);
    put32(out, 0x2C, static_cast<std::uint32_t>(fat_sectors));
    put32(out, 0x30, dir_start);
    put32(out, 0x38, kCutoff);
    put32(out, 0x3C, minifat_sectors ? minifat_start : kEnd);
    put32(out, 0x40, static_cast<std::uint32_t>(minifat_sectors));
    put32(out, 0x44, kEnd);
    put32(out, 0x48, 0);
    for (std::size_t i = 0; i < 109; ++i)
        put32(out, 0x4C + i * 4, i < fat_sectors ? static_cast<std::uint32_t>(i) : kFree);

    auto sector_off = [](std::uint32_t s) { return (static_cast<std::size_t>(s) + 1) * kSector; };
    for (std::size_t i = 0; i < fat.size(); ++i) put32(out, kSector + i * 4, fat[i]);

    // Directory (unused slots are empty entries with NOSTREAM links)
    const std::size_t dir_off = sector_off(dir_start);
    for (std::size_t i = 0; i < dir_sectors * (kSector / 128); ++i) {
        const std::size_t e = dir_off + i * 128;
        put32(out, e + 0x44, kNone);
        put32(out, e + 0x48, kNone);
        put32(out, e + 0x4C, kNone);
        if (i >= nodes.size()) continue;
        const auto& n = nodes[i];
        for (std::size_t c = 0; c < n.name.size(); ++c) put16(out, e + c * 2, static_cast<unsigned char>(n.name[c]));
        put16(out, e + 0x40, static_cast<std::uint32_t>((n.name.size() + 1) * 2));
        out[e + 0x42] = static_cast<std::uint8_t>(n.type);
        out[e + 0x43] = 1;  // black
        put32(out, e + 0x44, n.left);
        put32(out, e + 0x48, n.right);
        put32(out, e + 0x4C, n.child);
        put32(out, e + 0x74, n.type == 1 ? 0 : n.start);
        put32(out, e + 0x78, n.type == 1 ? 0 : n.size);
    }
    for (std::size_t i = 0; i < minifat_sectors * (kSector / 4); ++i)
        put32(out, sector_off(minifat_start) + i * 4, i < minifat.size() ? minifat[i] : kFree);
    if (!ministream.empty()) std::copy(ministream.begin(), ministream.end(), out.begin() + static_cast<std::ptrdiff_t>(sector_off(ministream_start)));
    for (const auto& n : nodes) {
        if (n.type == 2 && n.size >= kCutoff)
            std::copy(n.data->begin(), n.data->end(), out.begin() + static_cast<std::ptrdiff_t>(sector_off(n.start)));
    }
    return out;
}

}  // namespace phishlens::synth
