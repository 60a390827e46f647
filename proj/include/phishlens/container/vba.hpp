#pragma once

#include <string>
#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/container/cfb.hpp"

namespace phishlens::container {

struct VbaModule {
    std::string name;
    std::string source;  // decompressed, CRLF normalized to LF
};

struct VbaExtraction {
    std::vector<VbaModule> modules;
    std::vector<std::string> warnings;
};

/// MS-OVBA CompressedContainer decompression. Throws Error(malformed_chunk) on
/// a bad signature byte, a truncated token, or a copy token reaching before the
/// start of the decompressed chunk.
Bytes ovba_decompress(ByteView container);

/// Module sources of the VBA project held by `file`. Looks for the dir stream
/// under "VBA/dir" or "<any storage>/VBA/dir" (vbaProject.bin stores it at the
/// root). A missing VBA storage yields an empty result; a malformed module is
/// skipped with a warning.
VbaExtraction vba_extract(const CfbFile& file);

}  // namespace phishlens::container
