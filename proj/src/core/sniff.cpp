#include "phishlens/sniff.hpp"

#include <algorithm>
#include <string_view>

namespace phishlens {
namespace {

bool has_prefix(ByteView data, std::string_view magic) noexcept {
    return data.size() >= magic.size() && std::equal(magic.begin(), magic.end(), data.begin(),
                                                     [](char a, std::uint8_t b) { return static_cast<std::uint8_t>(a) == b; });
}

// Walks the central directory looking for the OOXML main parts. Falls back to
// scanning local headers when no end-of-central-directory record is present.
FileKind classify_zip(ByteView data) noexcept {
    constexpr std::string_view kWord = "word/document.xml";
    constexpr std::string_view kExcel = "xl/workbook.xml";
    auto check_name = [&](std::string_view name) -> FileKind {
        if (name == kWord) return FileKind::docx;
        if (name == kExcel) return FileKind::xlsx;
        return FileKind::unknown;
    };

    if (data.size() >= 22) {
        const std::size_t lowest = data.size() > 22 + 0xFFFF ? data.size() - 22 - 0xFFFF : 0;
        for (std::size_t i = data.size() - 22 + 1; i-- > lowest;) {
            if (read_u32le(data, i) != 0x06054b50) continue;
            std::size_t entries = read_u16le(data, i + 10);
            std::size_t off = read_u32le(data, i + 16);
            for (std::size_t e = 0; e < entries; ++e) {
                if (off + 46 > data.size() || read_u32le(data, off) != 0x02014b50) break;
                const std::size_t name_len = read_u16le(data, off + 28);
                const std::size_t extra = read_u16le(data, off + 30);
                const std::size_t comment = read_u16le(data, off + 32);
                if (off + 46 + name_len > data.size()) break;
                auto kind = check_name(as_chars(data.subspan(off + 46, name_len)));
                if (kind != FileKind::unknown) return kind;
                off += 46 + name_len + extra + comment;
            }
            break;
        }
    }
    std::size_t off = 0;
    while (off + 30 <= data.size() && read_u32le(data, off) == 0x04034b50) {
        const std::size_t name_len = read_u16le(data, off + 26);
        const std::size_t extra = read_u16le(data, off + 28);
        const std::size_t csize = read_u32le(data, off + 18);
        if (off + 30 + name_len > data.size()) break;
        auto kind = check_name(as_chars(data.subspan(off + 30, name_len)));
        if (kind != FileKind::unknown) return kind;
        off += 30 + name_len + extra + csize;
    }
    return FileKind::unknown;
}

}  // namespace

FileKind sniff_file_kind(ByteView data) noexcept {
    if (has_prefix(data, "PK\x03\x04")) return classify_zip(data);
    if (has_prefix(data, "%PDF-")) return FileKind::pdf;
    if (has_prefix(data, "\x89PNG\r\n\x1a\n")) return FileKind::qr_image;
    if (data.size() >= 3 && data[0] == 'P' && data[1] == '5' &&
        (data[2] == ' ' || data[2] == '\n' || data[2] == '\r' || data[2] == '\t'))
        return FileKind::qr_image;

    std::string_view text = as_chars(data);
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    text = text.substr(0, std::min<std::size_t>(text.size(), 4096));
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r' ||
                             text.front() == '\n' || text.front() == '\f'))
        text.remove_prefix(1);
    if (istarts_with(text, "<!doctype") || istarts_with(text, "<html")) return FileKind::html;
    return FileKind::unknown;
}

}  // namespace phishlens
