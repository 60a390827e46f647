#include <doctest.h>

#include "phishlens/docx.hpp"
#include "phishlens/ml/rng.hpp"
#include "phishlens/synth/ooxml.hpp"
#include "phishlens/synth/vba_project.hpp"
#include "phishlens/synth/zip_writer.hpp"

using namespace phishlens;

namespace {

synth::DocxSpec one_paragraph() {
    synth::DocxSpec spec;
    spec.paragraphs = {"A short note about the garden."};
    return spec;
}

std::size_t brute_force_keywords(std::string source, const std::vector<std::string>& keywords) {
    for (auto& c : source) c = ascii_lower(c);
    std::size_t n = 0;
    for (const auto& k : keywords) {
        for (std::size_t p = source.find(k); p != std::string::npos; p = source.find(k, p + k.size())) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("minimal benign docx") {
    const auto bytes = synth::build_docx(one_paragraph());
    const auto a = extract_docx(bytes);
    CHECK_FALSE(a.parse_failed);
    CHECK(a.features.macro_present == 0);
    CHECK(a.features.dde_present == 0);
    CHECK(a.features.ole_object_count == 0);
    CHECK(a.features.vba_keywords_count == 0);
    CHECK(a.features.struct_counter("ContentType") >= 1);
    CHECK(a.features.file_size == static_cast<double>(bytes.size()));
    CHECK(a.features.entropy == doctest::Approx(shannon_entropy(bytes)));

    auto full = a.features.to_vector();
    CHECK(full.size() == 43);
    auto top = project_top10_docx(a.features);
    REQUIRE(top.size() == 10);
    const std::vector<std::string> expected{"ole_object_count", "ole_object_type_count", "macro_present", "dde_present",
                                            "vba_keywords_count", "entropy", "struct_ContentType", "struct_PartName",
                                            "file_size", "struct_pos"};
    CHECK(top.schema().columns() == expected);
    CHECK(top[0] == 0);
    CHECK(top[4] == 0);
    CHECK(top[5] == a.features.entropy);
    CHECK(top[6] == a.features.struct_counter("ContentType"));
    CHECK(top[7] == a.features.struct_counter("PartName"));
    CHECK(top[8] == a.features.file_size);
    CHECK(top[9] == a.features.struct_counter("pos"));
}

TEST_CASE("projection ignores unselected counters") {
    DocxFeatures f;
    f.entropy = 3;
    auto before = project_top10_docx(f);
    f.struct_counters[10] = 99;  // "val"
    auto after = project_top10_docx(f);
    CHECK(std::equal(before.values().begin(), before.values().end(), after.values().begin()));
}

TEST_CASE("macro keywords") {
    auto spec = one_paragraph();
    spec.vba_project = synth::build_vba_project({{"Module1", "Sub AutoOpen()\n  Shell \"a\"\n  Shell \"b\"\nEnd Sub\n"}});
    const auto a = extract_docx(synth::build_docx(spec));
    CHECK(a.features.macro_present == 1);
    CHECK(a.features.vba_keywords_count == 3);
}

TEST_CASE("keyword count equals a brute-force scan") {
    ml::Rng rng(9);
    const char* parts[] = {"CreateObject(", "x = 1\n", "PowerShell -c ", "' comment\n", "Environ(\"TEMP\")", "Sub ",
                           "chrw(65)", "AutoOpen", "Shell", "wscript.shell"};
    const auto& keywords = AnalyzerConfig::defaults().vba_keywords;
    for (int t = 0; t < 25; ++t) {
        std::string m1, m2;
        for (int i = 0; i < 20; ++i) (rng.below(2) ? m1 : m2) += parts[rng.below(10)];
        auto spec = one_paragraph();
        spec.vba_project = synth::build_vba_project({{"A", m1}, {"B", m2}});
        const auto a = extract_docx(synth::build_docx(spec));
        CHECK(a.features.vba_keywords_count ==
              static_cast<double>(brute_force_keywords(m1, keywords) + brute_force_keywords(m2, keywords)));
        CHECK(count_vba_keywords(m1, keywords) == brute_force_keywords(m1, keywords));
    }
}

TEST_CASE("DDE field instructions") {
    auto spec = one_paragraph();
    spec.field_instructions = {" DDEAUTO c:\\\\windows\\\\system32\\\\cmd.exe \"/k calc\" "};
    CHECK(extract_docx(synth::build_docx(spec)).features.dde_present == 1);

    spec.split_instructions = true;
    CHECK(extract_docx(synth::build_docx(spec)).features.dde_present == 1);

    auto plain = one_paragraph();
    plain.field_instructions = {" DDE Excel \"Sheet1\" R1C1 "};
    CHECK(extract_docx(synth::build_docx(plain)).features.dde_present == 1);

    auto benign = one_paragraph();
    benign.field_instructions = {" PAGE ", " TOC \\o \"1-3\" "};
    benign.paragraphs.push_back("The ADDENDUM lists DDE-free content.");
    CHECK(extract_docx(synth::build_docx(benign)).features.dde_present == 0);
}

TEST_CASE("OLE objects") {
    auto spec = one_paragraph();
    spec.ole_objects = {{"Excel.Sheet.12", "xlsx", Bytes(100, 1)}, {"Excel.Sheet.12", "xlsx", Bytes(120, 2)}};
    auto a = extract_docx(synth::build_docx(spec));
    CHECK(a.features.ole_object_count == 2);
    CHECK(a.features.ole_object_type_count == 1);

    spec.ole_objects.push_back({"Package", "bin", Bytes(50, 3)});
    a = extract_docx(synth::build_docx(spec));
    CHECK(a.features.ole_object_count == 3);
    CHECK(a.features.ole_object_type_count == 2);
    CHECK(a.features.ole_object_type_count <= a.features.ole_object_count);
}

TEST_CASE("non-zip input") {
    const auto a = extract_docx(as_bytes("definitely not a zip"));
    CHECK(a.parse_failed);
    CHECK(a.features.file_size == 20);
    CHECK(a.features.entropy > 0);
    auto r = analyze_docx(as_bytes("nope"), AnalyzerConfig::defaults(), "x.docx");
    CHECK(r.parse_failed);
    CHECK(r.features.size() == 43);
}

TEST_CASE("zip without a document part still reports") {
    synth::ZipWriter w;
    w.add("[Content_Types].xml", "<Types><Default Extension=\"xml\" ContentType=\"application/xml\"/></Types>");
    const auto a = extract_docx(w.finish());
    CHECK(a.features.struct_counter("ContentType") == 1);
    CHECK(a.features.struct_counter("Default") == 1);
}

TEST_CASE("docx analysis is deterministic") {
    auto spec = one_paragraph();
    spec.table = {{"a", "b"}, {"c", "d"}};
    spec.hyperlinks = {"https://example.org/x"};
    const auto bytes = synth::build_docx(spec);
    auto a = extract_docx(bytes).features.to_vector();
    auto b = extract_docx(bytes).features.to_vector();
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
}
