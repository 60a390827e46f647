#include <cctype>
#include <string>

#include "phishlens/error.hpp"
#include "phishlens/qr.hpp"

namespace phishlens::qr {

QrBitmap render(const QrMatrix& m, int module_px, int quiet_zone) {
    if (module_px <= 0) throw Error(Errc::invalid_argument, "module_px must be at least 1");
    if (quiet_zone < 0) throw Error(Errc::invalid_argument, "quiet zone must be non-negative");
    QrBitmap b;
    b.module_px = module_px;
    b.quiet_zone = quiet_zone;
    b.width = b.height = (m.size + 2 * quiet_zone) * module_px;
    b.pixels.assign(static_cast<std::size_t>(b.width) * static_cast<std::size_t>(b.height), 255);
    for (int y = 0; y < m.size; ++y)
        for (int x = 0; x < m.size; ++x) {
            if (!m.get(x, y)) continue;
            for (int py = 0; py < module_px; ++py) {
                std::size_t row = static_cast<std::size_t>((y + quiet_zone) * module_px + py) * static_cast<std::size_t>(b.width);
                for (int px = 0; px < module_px; ++px)
                    b.pixels[row + static_cast<std::size_t>((x + quiet_zone) * module_px + px)] = 0;
            }
        }
    return b;
}

Bytes write_pgm(const QrBitmap& bitmap) {
    std::string header = "P5\n" + std::to_string(bitmap.width) + " " + std::to_string(bitmap.height) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.insert(out.end(), bitmap.pixels.begin(), bitmap.pixels.end());
    return out;
}

QrBitmap read_pgm(ByteView data) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(data[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&](const char* what) {
        skip_space();
        long v = 0;
        std::size_t start = pos;
        while (pos < data.size() && std::isdigit(data[pos]) && v < 1000000) v = v * 10 + (data[pos++] - '0');
        if (pos == start) throw Error(Errc::parse_error, std::string("PGM: missing ") + what);
        return v;
    };
    if (data.size() < 2 || data[0] != 'P' || data[1] != '5') throw Error(Errc::parse_error, "not a binary PGM (P5)");
    pos = 2;
    long w = read_int("width"), h = read_int("height"), maxval = read_int("maxval");
    if (w <= 0 || h <= 0 || w > 20000 || h > 20000) throw Error(Errc::parse_error, "PGM: unsupported dimensions");
    if (maxval != 255) throw Error(Errc::parse_error, "PGM: only maxval 255 is supported");
    if (pos >= data.size() || !std::isspace(data[pos])) throw Error(Errc::parse_error, "PGM: malformed header");
    ++pos;
    std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (data.size() - pos < need) throw Error(Errc::parse_error, "PGM: truncated pixel data");
    QrBitmap b;
    b.width = static_cast<int>(w);
    b.height = static_cast<int>(h);
    b.pixels.assign(data.begin() + static_cast<std::ptrdiff_t>(pos), data.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return b;
}

}  // namespace phishlens::qr
