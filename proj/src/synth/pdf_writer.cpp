#include "phishlens/synth/pdf_writer.hpp"

#include <cstdio>

#include <zlib.h>

#include "phishlens/error.hpp"

namespace phishlens::synth {

int PdfWriter::add_object(std::string body) {
    objects_.push_back(to_bytes(body));
    return static_cast<int>(objects_.size());
}

int PdfWriter::add_stream(std::string_view dict_entries, ByteView data) {
    std::string head = "<< " + std::string(dict_entries) + " /Length " + std::to_string(data.size()) + " >>\nstream\n";
    Bytes body = to_bytes(head);
    body.insert(body.end(), data.begin(), data.end());
    const std::string tail = "\nendstream";
    body.insert(body.end(), tail.begin(), tail.end());
    objects_.push_back(std::move(body));
    return static_cast<int>(objects_.size());
}

int PdfWriter::reserve() {
    objects_.emplace_back();
    return static_cast<int>(objects_.size());
}

void PdfWriter::set_object(int id, std::string body) { objects_.at(static_cast<std::size_t>(id - 1)) = to_bytes(body); }

Bytes PdfWriter::finish(int root_id, std::string_view trailer_entries) const {
    Bytes out = to_bytes("%PDF-" + version_ + "\n%\xE2\xE3\xCF\xD3\n");
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < objects_.size(); ++i) {
        offsets.push_back(out.size());
        const std::string head = std::to_string(i + 1) + " 0 obj\n";
        out.insert(out.end(), head.begin(), head.end());
        out.insert(out.end(), objects_[i].begin(), objects_[i].end());
        const std::string tail = "\nendobj\n";
        out.insert(out.end(), tail.begin(), tail.end());
    }
    const std::size_t xref = out.size();
    std::string table = "xref\n0 " + std::to_string(objects_.size() + 1) + "\n0000000000 65535 f \n";
    for (std::size_t off : offsets) {
        char line[24];
        std::snprintf(line, sizeof line, "%010zu 00000 n \n", off);
        table += line;
    }
    table += "trailer\n<< /Size " + std::to_string(objects_.size() + 1) + " /Root " + std::to_string(root_id) + " 0 R";
    if (!trailer_entries.empty()) table += " " + std::string(trailer_entries);
    table += " >>\nstartxref\n" + std::to_string(xref) + "\n%%EOF\n";
    out.insert(out.end(), table.begin(), table.end());
    return out;
}

Bytes flate_compress(ByteView data) {
    uLongf size = compressBound(static_cast<uLong>(data.size()));
    Bytes out(size);
    if (compress2(out.data(), &size, data.data(), static_cast<uLong>(data.size()), 6) != Z_OK)
        throw Error(Errc::io_error, "zlib compress2 failed");
    out.resize(size);
    return out;
}

}  // namespace phishlens::synth
