#pragma once

#include <string>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::synth {

struct VbaModuleSource {
    std::string name;
    std::string source;  // LF line endings; written to the container as CRLF
};

/// MS-OVBA CompressedContainer made only of literal tokens. Always decodable,
/// never smaller than the input.
Bytes ovba_compress_literal(ByteView data);

/// A vbaProject.bin compound file: PROJECT, VBA/_VBA_PROJECT, VBA/dir and one
/// stream per module (source stored after a short performance-cache stub).
Bytes build_vba_project(const std::vector<VbaModuleSource>& modules);

}  // namespace phishlens::synth
