#include "phishlens/container/cfb.hpp"

#include <algorithm>
#include <array>

#include "phishlens/error.hpp"

namespace phishlens::container {
namespace {

constexpr std::array<std::uint8_t, 8> kSignature{0xD0, 0xCF, 0x11, 0xE0, 0xA1, 0xB1, 0x1A, 0xE1};
constexpr std::uint32_t kEndOfChain = 0xFFFFFFFE;
constexpr std::uint32_t kFreeSect = 0xFFFFFFFF;
constexpr std::uint32_t kMaxRegSect = 0xFFFFFFFA;
constexpr std::uint32_t kNoStream = 0xFFFFFFFF;

std::vector<std::string_view> split_path(std::string_view path) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto slash = path.find('/', start);
        auto part = path.substr(start, slash == std::string_view::npos ? std::string_view::npos : slash - start);
        if (!part.empty()) parts.push_back(part);
        if (slash == std::string_view::npos) break;
        start = slash + 1;
    }
    return parts;
}

}  // namespace

CfbFile CfbFile::open(ByteView data) {
    if (data.size() < 512 || !std::equal(kSignature.begin(), kSignature.end(), data.begin()))
        throw Error(Errc::bad_signature, "not a compound file");

    CfbFile f;
    f.data_.assign(data.begin(), data.end());
    ByteView d = f.data_;
    const std::uint16_t major = read_u16le(d, 0x1A);
    const std::uint16_t shift = read_u16le(d, 0x1E);
    const std::uint16_t mini_shift = read_u16le(d, 0x20);
    if (shift != 9 && shift != 12) throw Error(Errc::bad_signature, "unsupported sector shift " + std::to_string(shift));
    if (mini_shift != 6) throw Error(Errc::bad_signature, "unsupported mini sector shift " + std::to_string(mini_shift));
    f.sector_size_ = 1u << shift;
    f.mini_sector_size_ = 1u << mini_shift;
    f.mini_cutoff_ = read_u32le(d, 0x38);
    if (f.mini_cutoff_ == 0 || f.mini_cutoff_ > (1u << 20)) f.mini_cutoff_ = 4096;

    const std::uint32_t num_fat = read_u32le(d, 0x2C);
    const std::uint32_t first_dir = read_u32le(d, 0x30);
    const std::uint32_t first_minifat = read_u32le(d, 0x3C);
    const std::uint32_t num_minifat = read_u32le(d, 0x40);
    std::uint32_t difat_sector = read_u32le(d, 0x44);
    const std::uint32_t num_difat = read_u32le(d, 0x48);

    const std::size_t sector_count = d.size() > f.sector_size_ ? (d.size() - f.sector_size_ + f.sector_size_ - 1) / f.sector_size_ : 0;
    auto sector_bytes = [&](std::uint32_t s) -> ByteView {
        const std::uint64_t off = (static_cast<std::uint64_t>(s) + 1) * f.sector_size_;
        if (s > kMaxRegSect || off >= d.size())
            throw Error(Errc::sector_out_of_range, "sector " + std::to_string(s) + " beyond end of file");
        return d.subspan(off, std::min<std::uint64_t>(f.sector_size_, d.size() - off));
    };

    // DIFAT: 109 header slots, then chained DIFAT sectors.
    std::vector<std::uint32_t> fat_sectors;
    for (std::size_t i = 0; i < 109 && fat_sectors.size() < num_fat; ++i) {
        std::uint32_t s = read_u32le(d, 0x4C + i * 4);
        if (s == kFreeSect) continue;
        fat_sectors.push_back(s);
    }
    std::vector<bool> difat_seen(sector_count + 1, false);
    for (std::uint32_t n = 0; n < num_difat && difat_sector <= kMaxRegSect && fat_sectors.size() < num_fat; ++n) {
        if (difat_sector >= difat_seen.size()) throw Error(Errc::sector_out_of_range, "DIFAT sector out of range");
        if (difat_seen[difat_sector]) throw Error(Errc::fat_cycle, "DIFAT chain revisits a sector");
        difat_seen[difat_sector] = true;
        ByteView sb = sector_bytes(difat_sector);
        const std::size_t per = f.sector_size_ / 4 - 1;
        for (std::size_t i = 0; i < per && (i + 1) * 4 <= sb.size() && fat_sectors.size() < num_fat; ++i) {
            std::uint32_t s = read_u32le(sb, i * 4);
            if (s != kFreeSect) fat_sectors.push_back(s);
        }
        difat_sector = sb.size() >= f.sector_size_ ? read_u32le(sb, per * 4) : kEndOfChain;
    }
    if (fat_sectors.size() > sector_count + 1) throw Error(Errc::sector_out_of_range, "more FAT sectors than file sectors");
    for (std::uint32_t s : fat_sectors) {
        ByteView sb = sector_bytes(s);
        for (std::size_t i = 0; i + 4 <= sb.size(); i += 4) f.fat_.push_back(read_u32le(sb, i));
    }

    auto read_chain_regular = [&](std::uint32_t start, std::size_t max_bytes) {
        Bytes out;
        auto sectors = f.follow(f.fat_, start, (max_bytes + f.sector_size_ - 1) / f.sector_size_);
        for (std::uint32_t s : sectors) {
            ByteView sb = sector_bytes(s);
            out.insert(out.end(), sb.begin(), sb.end());
            if (sb.size() < f.sector_size_) out.resize(out.size() + (f.sector_size_ - sb.size()), 0);
        }
        return out;
    };

    // Directory
    Bytes dir_bytes = read_chain_regular(first_dir, d.size());
    for (std::size_t off = 0; off + 128 <= dir_bytes.size(); off += 128) {
        ByteView e{dir_bytes.data() + off, 128};
        CfbDirEntry entry;
        std::size_t name_len = std::min<std::size_t>(read_u16le(e, 0x40), 64);
        for (std::size_t i = 0; i + 1 < name_len; i += 2) {
            std::uint16_t ch = read_u16le(e, i);
            if (ch == 0) break;
            entry.name += ch < 0x80 ? static_cast<char>(ch) : '?';
        }
        std::uint8_t type = e[0x42];
        entry.type = (type == 1 || type == 2 || type == 5) ? static_cast<CfbObjectType>(type) : CfbObjectType::unknown;
        entry.left = read_u32le(e, 0x44);
        entry.right = read_u32le(e, 0x48);
        entry.child = read_u32le(e, 0x4C);
        entry.start_sector = read_u32le(e, 0x74);
        entry.size = major == 3 ? read_u32le(e, 0x78) : read_u64le(e, 0x78);
        f.dir_.push_back(std::move(entry));
    }
    if (f.dir_.empty() || f.dir_[0].type != CfbObjectType::root)
        throw Error(Errc::bad_signature, "directory has no root entry");

    // Mini FAT and the mini stream held by the root entry.
    if (num_minifat > 0 && first_minifat <= kMaxRegSect) {
        Bytes mf = read_chain_regular(first_minifat, static_cast<std::size_t>(num_minifat) * f.sector_size_);
        for (std::size_t i = 0; i + 4 <= mf.size(); i += 4) f.minifat_.push_back(read_u32le(mf, i));
    }
    const auto& root = f.dir_[0];
    if (root.size > 0 && root.start_sector <= kMaxRegSect) {
        const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(root.size, d.size()));
        f.ministream_ = read_chain_regular(root.start_sector, want);
        if (f.ministream_.size() > want) f.ministream_.resize(want);
    }
    return f;
}

std::vector<std::uint32_t> CfbFile::follow(const std::vector<std::uint32_t>& table, std::uint32_t start,
                                           std::size_t limit) const {
    std::vector<std::uint32_t> chain;
    std::vector<bool> visited(table.size(), false);
    std::uint32_t s = start;
    while (s != kEndOfChain && chain.size() < limit) {
        if (s >= table.size()) throw Error(Errc::sector_out_of_range, "chain reaches sector " + std::to_string(s));
        if (visited[s]) throw Error(Errc::fat_cycle, "chain revisits sector " + std::to_string(s));
        visited[s] = true;
        chain.push_back(s);
        s = table[s];
    }
    return chain;
}

Bytes CfbFile::chain(std::uint32_t start, std::uint64_t size, bool mini) const {
    Bytes out;
    if (size == 0) return out;
    if (mini) {
        const std::size_t want = static_cast<std::size_t>(size);
        auto sectors = follow(minifat_, start, (want + mini_sector_size_ - 1) / mini_sector_size_);
        for (std::uint32_t s : sectors) {
            const std::size_t off = static_cast<std::size_t>(s) * mini_sector_size_;
            if (off >= ministream_.size())
                throw Error(Errc::sector_out_of_range, "mini sector " + std::to_string(s) + " beyond mini stream");
            const std::size_t n = std::min<std::size_t>(mini_sector_size_, ministream_.size() - off);
            out.insert(out.end(), ministream_.begin() + off, ministream_.begin() + off + n);
        }
    } else {
        const std::size_t want = static_cast<std::size_t>(std::min<std::uint64_t>(size, data_.size()));
        auto sectors = follow(fat_, start, (want + sector_size_ - 1) / sector_size_);
        for (std::uint32_t s : sectors) {
            const std::uint64_t off = (static_cast<std::uint64_t>(s) + 1) * sector_size_;
            if (off >= data_.size())
                throw Error(Errc::sector_out_of_range, "sector " + std::to_string(s) + " beyond end of file");
            const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(sector_size_, data_.size() - off));
            out.insert(out.end(), data_.begin() + static_cast<std::ptrdiff_t>(off),
                       data_.begin() + static_cast<std::ptrdiff_t>(off + n));
        }
    }
    if (out.size() > size) out.resize(static_cast<std::size_t>(size));
    return out;
}

std::vector<std::uint32_t> CfbFile::children(std::uint32_t storage_index) const {
    std::vector<std::uint32_t> out;
    if (storage_index >= dir_.size()) return out;
    std::vector<bool> seen(dir_.size(), false);
    std::vector<std::uint32_t> stack;
    if (dir_[storage_index].child != kNoStream) stack.push_back(dir_[storage_index].child);
    while (!stack.empty()) {
        std::uint32_t i = stack.back();
        stack.pop_back();
        if (i >= dir_.size() || seen[i]) continue;
        seen[i] = true;
        out.push_back(i);
        if (dir_[i].left != kNoStream) stack.push_back(dir_[i].left);
        if (dir_[i].right != kNoStream) stack.push_back(dir_[i].right);
    }
    std::sort(out.begin(), out.end());
    return out;
}

long CfbFile::find(std::string_view path) const {
    std::uint32_t current = 0;
    for (auto part : split_path(path)) {
        long found = -1;
        for (std::uint32_t c : children(current)) {
            if (iequals(dir_[c].name, part)) {
                found = static_cast<long>(c);
                break;
            }
        }
        if (found < 0) return -1;
        current = static_cast<std::uint32_t>(found);
    }
    return static_cast<long>(current);
}

bool CfbFile::has_stream(std::string_view path) const {
    long i = find(path);
    return i > 0 && dir_[static_cast<std::size_t>(i)].type == CfbObjectType::stream;
}

bool CfbFile::has_storage(std::string_view path) const {
    long i = find(path);
    return i >= 0 && (dir_[static_cast<std::size_t>(i)].type == CfbObjectType::storage ||
                      dir_[static_cast<std::size_t>(i)].type == CfbObjectType::root);
}

Bytes CfbFile::read_stream(std::string_view path) const {
    long i = find(path);
    if (i <= 0 || dir_[static_cast<std::size_t>(i)].type != CfbObjectType::stream)
        throw Error(Errc::stream_not_found, "no stream '" + std::string(path) + "'");
    return read_stream(static_cast<std::uint32_t>(i));
}

Bytes CfbFile::read_stream(std::uint32_t dir_index) const {
    if (dir_index >= dir_.size() || dir_[dir_index].type != CfbObjectType::stream)
        throw Error(Errc::stream_not_found, "directory entry " + std::to_string(dir_index) + " is not a stream");
    const auto& e = dir_[dir_index];
    return chain(e.start_sector, e.size, e.size < mini_cutoff_);
}

}  // namespace phishlens::container
