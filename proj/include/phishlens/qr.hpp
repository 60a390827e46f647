#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::qr {

enum class EcLevel { L, M, Q, H };

std::string_view ec_level_name(EcLevel level) noexcept;
std::optional<EcLevel> parse_ec_level(std::string_view name) noexcept;

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 10;

/// Module grid, row-major, true = dark.
struct QrMatrix {
    int version = 1;
    int size = 21;
    EcLevel ec_level = EcLevel::M;
    int mask_id = 0;
    std::vector<std::uint8_t> modules;

    bool get(int x, int y) const { return modules[static_cast<std::size_t>(y * size + x)] != 0; }
    void set(int x, int y, bool dark) { modules[static_cast<std::size_t>(y * size + x)] = dark ? 1 : 0; }
    void flip(int x, int y) { modules[static_cast<std::size_t>(y * size + x)] ^= 1; }
};

/// Grayscale raster, 0 dark and 255 light.
struct QrBitmap {
    int width = 0;
    int height = 0;
    int module_px = 0;
    int quiet_zone = 0;
    Bytes pixels;
};

/// Byte-mode payload capacity.
std::size_t capacity(int version, EcLevel level);

/// Smallest version 1..10 holding `payload` in byte mode. Without a forced
/// mask the lowest-penalty mask is chosen. Throws Error(payload_too_long).
QrMatrix encode(ByteView payload, EcLevel level = EcLevel::M, std::optional<int> forced_mask = std::nullopt);

/// Throws Error(invalid_argument) for module_px == 0.
QrBitmap render(const QrMatrix& m, int module_px = 8, int quiet_zone = 4);

Bytes write_pgm(const QrBitmap& bitmap);
/// Binary PGM (P5, maxval 255). Throws Error(parse_error).
QrBitmap read_pgm(ByteView data);

struct DecodeResult {
    Bytes payload;
    int version = 0;
    EcLevel ec_level = EcLevel::M;
    int mask_id = 0;
    int corrected_codewords = 0;
};

/// Throws Error(no_finder_patterns | format_unrecoverable | rs_failure | unsupported_mode).
DecodeResult decode_detailed(const QrBitmap& bitmap);
Bytes decode(const QrBitmap& bitmap);
/// Decodes an already sampled module grid (no geometry step).
DecodeResult decode_matrix(const QrMatrix& m);

// Layout queries, used to place errors at known codewords.
struct BlockShape {
    int data_codewords = 0;
    int ec_codewords = 0;
};
/// RS blocks in order (short blocks first).
std::vector<BlockShape> block_layout(int version, EcLevel level);
/// Position in the interleaved codeword stream of codeword `index` of block `block`.
int interleaved_position(int version, EcLevel level, int block, int index);
/// Module coordinates (x, y) of the 8 bits of each interleaved codeword, MSB first.
std::vector<std::array<std::pair<int, int>, 8>> codeword_modules(int version);

}  // namespace phishlens::qr
