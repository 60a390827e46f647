#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/dataset_csv.hpp"
#include "phishlens/features.hpp"
#include "phishlens/ml/rng.hpp"
#include "phishlens/report_json.hpp"
#include "phishlens/sniff.hpp"
#include "phishlens/synth/zip_writer.hpp"
#include "support.hpp"

using namespace phishlens;

TEST_CASE("entropy of fixed distributions") {
    CHECK(shannon_entropy(Bytes(1024, 0x41)) == 0.0);
    Bytes all(256);
    for (int i = 0; i < 256; ++i) all[i] = static_cast<std::uint8_t>(i);
    CHECK(shannon_entropy(all) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(shannon_entropy("aabb") == doctest::Approx(1.0));
    CHECK(shannon_entropy("aab") == doctest::Approx(0.9183).epsilon(1e-4));
    CHECK(shannon_entropy(ByteView{}) == 0.0);
}

TEST_CASE("entropy ignores byte order") {
    ml::Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        Bytes b(1 + rng.below(500));
        for (auto& x : b) x = static_cast<std::uint8_t>(rng.below(7) * 31);
        const double h = shannon_entropy(b);
        rng.shuffle(b);
        CHECK(shannon_entropy(b) == doctest::Approx(h).epsilon(1e-12));
    }
}

TEST_CASE("count_pattern") {
    CHECK(count_pattern("streamendstream", "stream", false) == 2);
    CHECK(count_pattern("AAA", "aa", true) == 1);
    CHECK(count_pattern("", "x", false) == 0);
    CHECK(count_pattern("AbCabc", "abc", false) == 1);
    CHECK(test::error_of([] { count_pattern("abc", "", false); }) == Errc::invalid_argument);
}

TEST_CASE("sniff_file_kind") {
    CHECK(sniff_file_kind(as_bytes("%PDF-1.7 ...")) == FileKind::pdf);
    CHECK(sniff_file_kind(as_bytes("hello")) == FileKind::unknown);
    CHECK(sniff_file_kind(as_bytes("  \n<!DOCTYPE html><html>")) == FileKind::html);
    CHECK(sniff_file_kind(as_bytes("<HTML><body>")) == FileKind::html);
    CHECK(sniff_file_kind(as_bytes("P5\n21 21\n255\n")) == FileKind::qr_image);
    CHECK(sniff_file_kind(as_bytes("\x89PNG\r\n\x1a\n....")) == FileKind::qr_image);
    CHECK(sniff_file_kind(ByteView{}) == FileKind::unknown);

    synth::ZipWriter docx;
    docx.add("[Content_Types].xml", "<Types/>");
    docx.add("word/document.xml", "<w:document/>");
    CHECK(sniff_file_kind(docx.finish()) == FileKind::docx);

    synth::ZipWriter xlsx;
    xlsx.add("xl/workbook.xml", "<workbook/>");
    CHECK(sniff_file_kind(xlsx.finish()) == FileKind::xlsx);

    synth::ZipWriter other;
    other.add("readme.txt", "plain");
    CHECK(sniff_file_kind(other.finish()) == FileKind::unknown);
}

namespace {

SchemaPtr abc_schema() {
    static const SchemaPtr s = std::make_shared<const FeatureSchema>(FormatKind::url, std::vector<std::string>{"a", "b", "c"}, 1);
    return s;
}

}  // namespace

TEST_CASE("dataset CSV round trip") {
    LabeledDataset ds{abc_schema(), {}, {}};
    ds.add({1.0, 0.5, 1234567.0}, 0);
    ds.add({0.0, -2.25, 3.14159265}, 1);
    ds.add({1e-5, 7.0, 0.0}, 1);
    std::stringstream ss;
    write_dataset_csv(ds, ss);
    CHECK(ss.str().rfind("a,b,c,label\n", 0) == 0);
    auto back = read_dataset_csv(ss, abc_schema());
    CHECK(back == ds);
}

TEST_CASE("dataset CSV errors") {
    std::stringstream no_label("a,b,c\n1,2,3\n");
    CHECK(test::error_of([&] { read_dataset_csv(no_label, abc_schema()); }) == Errc::header_mismatch);

    std::stringstream bad_value("a,b,c,label\n1,abc,3,0\n");
    try {
        read_dataset_csv(bad_value, abc_schema());
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::parse_error);
        const std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("'b'") != std::string::npos);
    }

    std::stringstream bad_label("a,b,c,label\n1,2,3,2\n");
    CHECK(test::error_of([&] { read_dataset_csv(bad_label, abc_schema()); }) == Errc::label_out_of_range);
}

TEST_CASE("feature vectors") {
    FeatureVector v(abc_schema(), {1, std::numeric_limits<double>::quiet_NaN(), 3});
    auto bad = v.sanitize();
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == "b");
    CHECK(v.get("b") == 0.0);
    CHECK(test::error_of([&] { v.get("zzz"); }) == Errc::schema_mismatch);

    const std::vector<std::string> names{"c", "a"};
    auto projected = v.project(project_schema(*abc_schema(), names));
    CHECK(projected.size() == 2);
    CHECK(projected[0] == 3.0);
    CHECK(projected[1] == 1.0);
    const std::vector<std::string> unknown{"q"};
    CHECK(test::error_of([&] { project_schema(*abc_schema(), unknown); }) == Errc::schema_mismatch);
}

TEST_CASE("report JSON keys") {
    AnalysisReport r{"x.pdf", FormatKind::pdf, FeatureVector(abc_schema(), {1, 2, 3}), {"w"}, false};
    auto j = report_to_json(r);
    CHECK(j["source_path"] == "x.pdf");
    CHECK(j["format"] == "pdf");
    CHECK(j["features"]["b"] == 2.0);
    CHECK(j["warnings"].size() == 1);
    CHECK(j["parse_failed"] == false);
}

TEST_CASE("config parsing") {
    auto c = parse_config("# comment\nhtml_keywords = Alpha, beta ,\nbase64_min_run = 12\n");
    CHECK(c.html_keywords == std::vector<std::string>{"alpha", "beta"});
    CHECK(c.base64_min_run == 12);
    CHECK(c.vba_keywords == AnalyzerConfig::defaults().vba_keywords);
    CHECK(test::error_of([] { parse_config("nonsense line\n"); }) == Errc::parse_error);
    CHECK(test::error_of([] { parse_config("colour = blue\n"); }) == Errc::parse_error);
    CHECK(test::error_of([] { parse_config("base64_min_run = 0\n"); }) == Errc::parse_error);
}

TEST_CASE("shipped config matches the defaults") {
    const auto c = load_config_file(PHISHLENS_SOURCE_DIR "/config/default.conf");
    const auto& d = AnalyzerConfig::defaults();
    CHECK(c.version == d.version);
    CHECK(c.vba_keywords == d.vba_keywords);
    CHECK(c.vba_api_keywords == d.vba_api_keywords);
    CHECK(c.html_keywords == d.html_keywords);
    CHECK(c.url_shorteners == d.url_shorteners);
    CHECK(c.base64_min_run == d.base64_min_run);
}
