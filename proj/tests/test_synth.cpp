#include <doctest.h>

#include "phishlens/docx.hpp"
#include "phishlens/html.hpp"
#include "phishlens/pdf.hpp"
#include "phishlens/sniff.hpp"
#include "phishlens/synth/corpus.hpp"
#include "phishlens/xlsx.hpp"
#include "support.hpp"

using namespace phishlens;
using namespace phishlens::synth;

TEST_CASE("same seed gives identical corpora") {
    for (auto format : {FormatKind::docx, FormatKind::xlsx, FormatKind::pdf, FormatKind::html}) {
        SynthConfig c{format, 5, 3, std::nullopt};
        const auto a = generate_corpus(c);
        const auto b = generate_corpus(c);
        REQUIRE(a.size() == 10);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].name == b[i].name);
            CHECK(a[i].data == b[i].data);
        }
        CHECK(a[0].label == 0);
        CHECK(a[9].label == 1);
        c.seed = 4;
        CHECK(generate_corpus(c)[0].data != a[0].data);
    }
}

TEST_CASE("generated files are recognized") {
    const std::pair<FormatKind, FileKind> kinds[] = {{FormatKind::docx, FileKind::docx},
                                                     {FormatKind::xlsx, FileKind::xlsx},
                                                     {FormatKind::pdf, FileKind::pdf},
                                                     {FormatKind::html, FileKind::html}};
    for (const auto& [format, kind] : kinds) {
        for (const auto& f : generate_corpus({format, 4, 1, std::nullopt})) CHECK(sniff_file_kind(f.data) == kind);
    }
}

TEST_CASE("malicious pdfs carry JavaScript open actions") {
    for (const auto& f : generate_corpus({FormatKind::pdf, 20, 7, std::nullopt})) {
        const auto a = extract_pdf(f.data);
        CHECK_FALSE(a.parse_failed);
        if (f.label == 1) {
            CHECK(a.features.openaction_count >= 1);
            CHECK(a.features.javascript_count >= 1);
        } else {
            CHECK(a.features.javascript_count == 0);
        }
    }
}

TEST_CASE("benign html has no suspicious keywords") {
    for (const auto& f : generate_corpus({FormatKind::html, 20, 7, std::nullopt})) {
        const auto a = extract_html(f.data);
        if (f.label == 0) CHECK(a.features.suspicious_keyword_count == 0);
        else CHECK(a.features.suspicious_keyword_count > 0);
    }
}

TEST_CASE("office indicators") {
    for (const auto& f : generate_corpus({FormatKind::docx, 15, 2, std::nullopt})) {
        const auto a = extract_docx(f.data);
        CHECK_FALSE(a.parse_failed);
        CHECK(a.features.macro_present == f.label);
        if (f.label == 0) CHECK(a.features.dde_present == 0);
    }
    for (const auto& f : generate_corpus({FormatKind::xlsx, 15, 2, std::nullopt})) {
        const auto a = extract_xlsx(f.data);
        CHECK_FALSE(a.parse_failed);
        if (f.label == 1) CHECK(a.features.macro_present == 1);
        if (f.label == 0) CHECK(a.features.remote_template_present == 0);
    }
}

TEST_CASE("indicator toggles") {
    SynthConfig c{FormatKind::docx, 10, 5, std::set<Indicator>{Indicator::dde}};
    for (const auto& f : generate_corpus(c)) {
        const auto a = extract_docx(f.data);
        CHECK(a.features.macro_present == 0);
        CHECK(a.features.dde_present == f.label);
    }
    c.indicators = std::set<Indicator>{Indicator::hidden_iframes};
    CHECK(test::error_of([&] { generate_corpus(c); }) == Errc::invalid_argument);
    CHECK(parse_indicator("remote_templates") == Indicator::remote_templates);
    CHECK_FALSE(parse_indicator("bogus"));
    CHECK(applicable_indicators(FormatKind::pdf) == std::set<Indicator>{Indicator::js_actions});
}

TEST_CASE("url generator") {
    const auto a = generate_urls(50, true, 9);
    CHECK(a == generate_urls(50, true, 9));
    CHECK(a.size() == 50);
    for (const auto& u : a) CHECK_FALSE(u.empty());
}
