#include <doctest.h>

#include "phishlens/pdf.hpp"
#include "phishlens/synth/pdf_writer.hpp"
#include "support.hpp"

using namespace phishlens;

namespace {

PdfFeatures pdf(std::string_view text) { return extract_pdf(as_bytes(text)).features; }

}  // namespace

TEST_CASE("minimal one-page fixture") {
    const auto doc = test::minimal_pdf();
    const auto f = pdf(doc);
    CHECK(f.valid_pdf_header == 1);
    CHECK(f.object_count == 4);
    CHECK(f.stream_count == 1);
    CHECK(f.endstream_count == 1);
    CHECK(f.text_length == 2);
    CHECK(f.page_count == 1);
    CHECK(f.metadata_size == 0);
    CHECK(f.trailer_present == 1);
    CHECK(f.file_size == static_cast<double>(doc.size()));

    auto top = project_top10_pdf(f);
    REQUIRE(top.size() == 10);
    CHECK(top[4] == 4);
    CHECK(top[5] == 1);
    CHECK(top[6] == 1);
    const std::vector<std::string> expected{"text_length",  "total_filters", "title_chars",    "file_size",
                                            "object_count", "stream_count",  "endstream_count", "metadata_size",
                                            "valid_pdf_header", "entropy_of_streams"};
    CHECK(top.schema().columns() == expected);
    CHECK(pdf_schema()->size() == 40);
}

TEST_CASE("not a pdf") {
    const auto a = extract_pdf(as_bytes("hello world"));
    CHECK(a.parse_failed);
    CHECK_FALSE(a.warnings.empty());
    CHECK(a.features.valid_pdf_header == 0);
    CHECK(a.features.object_count == 0);
    CHECK(a.features.stream_count == 0);
    CHECK(a.features.javascript_count == 0);
}

TEST_CASE("OpenAction JavaScript") {
    const auto f = pdf("%PDF-1.7\n1 0 obj\n<< /Type /Catalog /OpenAction << /S /JavaScript /JS (app.alert(1)) >> >>\nendobj\n");
    CHECK(f.openaction_count == 1);
    CHECK(f.javascript_count == 1);
    CHECK(f.js_count == 1);
    CHECK(f.risky_cooccurrence_count == 1);
}

TEST_CASE("URI with a nonstandard port") {
    auto f = pdf("%PDF-1.4\n1 0 obj\n<< /S /URI /URI (http://evil.test:8080/) >>\nendobj\n");
    CHECK(f.uri_count == 1);
    CHECK(f.nonstandard_port_flag == 1);
    f = pdf("%PDF-1.4\n1 0 obj\n<< /S /URI /URI (https://fine.test:443/x) >>\nendobj\n");
    CHECK(f.nonstandard_port_flag == 0);
}

TEST_CASE("hex-escaped names are decoded and counted") {
    const auto f = pdf("%PDF-1.4\n1 0 obj\n<< /#4Aava#53cript 2 0 R /Launch 3 0 R >>\nendobj\n");
    CHECK(f.javascript_count == 1);
    CHECK(f.launch_count == 1);
    CHECK(f.name_obfuscation_count == 1);
    CHECK(f.risky_cooccurrence_count == 1);
}

TEST_CASE("filters, metadata and info") {
    synth::PdfWriter w("1.5");
    const std::string content = "BT (Hello) Tj ET";
    const int stream = w.add_stream("/Filter /FlateDecode", synth::flate_compress(as_bytes(content)));
    const int nested = w.add_stream("/Filter [/ASCIIHexDecode /LZWDecode]", "00");
    const int page = w.add_object("<< /Type /Page /Contents " + std::to_string(stream) + " 0 R >>");
    const int meta = w.add_stream("/Type /Metadata /Subtype /XML", "<x:xmpmeta/>");
    const int font = w.add_object("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
    const int info = w.add_object("<< /Title (Quarterly) /Author (Ann) >>");
    const int root = w.add_object("<< /Type /Catalog /Metadata " + std::to_string(meta) + " 0 R >>");
    (void)nested;
    (void)page;
    (void)font;
    const auto doc = w.finish(root, "/Info " + std::to_string(info) + " 0 R");
    const auto f = extract_pdf(doc).features;
    CHECK(f.text_length == 5);
    CHECK(f.total_filters == 3);
    CHECK(f.nested_filter_count == 1);
    CHECK(f.lzw_count == 1);
    CHECK(f.title_chars == 9);
    CHECK(f.metadata_size == std::string("Quarterly").size() + std::string("Ann").size() + std::string("<x:xmpmeta/>").size());
    CHECK(f.font_object_count == 1);
    CHECK(f.stream_count == 3);
    CHECK(f.xref_table_count == 1);
    CHECK(f.xref_entry_count == 8);
    CHECK(f.startxref_present == 1);
    CHECK(f.page_count == 1);
}

TEST_CASE("stream bodies are not lexed as objects") {
    const auto f = pdf("%PDF-1.4\n1 0 obj\n<< /Length 6 >>\nstream\nABCDEF\nendstream\nendobj\n"
                       "2 0 obj\n<< /Length 999 >>\nstream\nxx /JavaScript yy\nendstream\nendobj\n");
    CHECK(f.object_count == 2);
    CHECK(f.stream_count == 2);
    CHECK(f.javascript_count == 0);
}

TEST_CASE("encryption and forms") {
    const auto f = pdf("%PDF-1.6\n1 0 obj\n<< /AcroForm << /XFA 2 0 R >> /AA << /O 3 0 R >> >>\nendobj\n"
                       "trailer\n<< /Encrypt 5 0 R >>\n");
    CHECK(f.is_encrypted == 1);
    CHECK(f.acroform_present == 1);
    CHECK(f.xfa_present == 1);
    CHECK(f.aa_count == 1);
}

TEST_CASE("truncated fixtures never fail hard") {
    const auto doc = test::minimal_pdf();
    for (std::size_t n = 0; n <= doc.size(); ++n) {
        const auto a = extract_pdf(as_bytes(std::string_view(doc).substr(0, n)));
        CHECK(a.features.object_count <= 4);
    }
}
