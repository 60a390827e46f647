#pragma once

#include <map>
#include <string>
#include <string_view>

#include "phishlens/bytes.hpp"

namespace phishlens::synth {

/// Writes version-3 compound files (512-byte sectors). Streams shorter than
/// 4096 bytes go to the mini stream. Storages are created from '/'-separated
/// stream paths.
class CfbWriter {
public:
    void add_stream(std::string_view path, ByteView data);
    Bytes finish() const;

private:
    std::map<std::string, Bytes> streams_;
};

}  // namespace phishlens::synth
