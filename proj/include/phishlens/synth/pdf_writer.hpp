#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::synth {

/// Assembles a classic-xref PDF from object bodies. Object numbers start at 1
/// in insertion order.
class PdfWriter {
public:
    explicit PdfWriter(std::string version = "1.7") : version_(std::move(version)) {}

    int add_object(std::string body);
    /// `dict_entries` go inside << >>; /Length is appended automatically.
    int add_stream(std::string_view dict_entries, ByteView data);
    int add_stream(std::string_view dict_entries, std::string_view data) { return add_stream(dict_entries, as_bytes(data)); }

    /// Reserves an object number whose body is provided later with set_object.
    int reserve();
    void set_object(int id, std::string body);

    /// `trailer_entries` are extra trailer keys such as "/Info 5 0 R".
    Bytes finish(int root_id, std::string_view trailer_entries = {}) const;

private:
    std::string version_;
    std::vector<Bytes> objects_;
};

/// zlib (RFC 1950) compression for /FlateDecode streams.
Bytes flate_compress(ByteView data);

}  // namespace phishlens::synth
