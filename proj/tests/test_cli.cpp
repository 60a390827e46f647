#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phishlens/cli/cli.hpp"
#include "phishlens/pdf.hpp"
#include "phishlens/synth/corpus.hpp"

using namespace phishlens;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "phishlens");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const char* env = std::getenv("PHISHLENS_TEST_TMP");
    fs::path dir = fs::path(env ? env : fs::temp_directory_path().string()) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

}  // namespace

TEST_CASE("scan three pdfs with the selected set") {
    const auto dir = scratch("scan_pdf");
    for (const auto& f : synth::generate_corpus({FormatKind::pdf, 1, 1, std::nullopt})) {
        std::ofstream(dir / f.name, std::ios::binary).write(reinterpret_cast<const char*>(f.data.data()),
                                                            static_cast<std::streamsize>(f.data.size()));
    }
    std::ofstream(dir / "third.pdf") << "%PDF-1.4\n1 0 obj\n<< >>\nendobj\n";
    const auto r = invoke({"scan", (dir / "*.pdf").string(), "--format", "pdf", "--features", "selected"});
    CHECK(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == join(pdf_selected_schema()->columns()));
    CHECK(rows[0].find("label") == std::string::npos);
}

TEST_CASE("auto format fans out per format") {
    const auto dir = scratch("scan_auto");
    for (auto format : {FormatKind::docx, FormatKind::html}) {
        for (const auto& f : synth::generate_corpus({format, 2, 3, std::nullopt})) {
            std::ofstream(dir / f.name, std::ios::binary).write(reinterpret_cast<const char*>(f.data.data()),
                                                                static_cast<std::streamsize>(f.data.size()));
        }
    }
    const auto out = dir / "out";
    const auto r = invoke({"scan", dir.string(), "--format", "auto", "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(lines(slurp(out / "docx.csv")).size() == 5);
    CHECK(lines(slurp(out / "html.csv")).size() == 5);
    CHECK_FALSE(fs::exists(out / "pdf.csv"));
    CHECK(fs::exists(out / "reports"));
}

TEST_CASE("empty glob is a usage error") {
    const auto dir = scratch("scan_empty");
    const auto r = invoke({"scan", (dir / "*.docx").string(), "--format", "docx"});
    CHECK(r.code == 2);
    CHECK(r.err.find("no inputs") != std::string::npos);
    CHECK(invoke({"scan"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("synth is reproducible and trains") {
    const auto base = scratch("synth");
    for (const char* name : {"a", "b"})
        CHECK(invoke({"synth", "--format", "html", "--count", "20", "--seed", "5", "--out", (base / name).string()}).code == 0);
    for (const auto& e : fs::directory_iterator(base / "a"))
        CHECK(slurp(e.path()) == slurp(base / "b" / e.path().filename()));

    const auto csv = base / "html.csv";
    const auto s = invoke({"scan", (base / "a").string(), "--format", "html", "--labels", (base / "a" / "labels.csv").string(),
                        "--out", csv.string()});
    REQUIRE(s.code == 0);
    CHECK(lines(slurp(csv)).size() == 41);

    const auto model = base / "model.json";
    const auto t = invoke({"train", "--data", csv.string(), "--out", model.string(), "--trees", "10"});
    CHECK(t.code == 0);
    CHECK(t.out.find("Random Forest") != std::string::npos);
    CHECK(invoke({"evaluate", "--model", model.string(), "--data", csv.string()}).code == 0);

    const auto rank = invoke({"rank", "--data", csv.string(), "--k", "5", "--out", (base / "rank").string()});
    CHECK(rank.code == 0);
    CHECK(fs::exists(base / "rank" / "ranking_gini.csv"));

    const auto other = base / "pdf.csv";
    invoke({"synth", "--format", "pdf", "--count", "5", "--out", (base / "p").string()});
    REQUIRE(invoke({"scan", (base / "p").string(), "--format", "pdf", "--labels", (base / "p" / "labels.csv").string(),
                 "--out", other.string()})
                .code == 0);
    CHECK(invoke({"evaluate", "--model", model.string(), "--data", other.string()}).code == 3);
    CHECK(invoke({"synth", "--format", "pdf", "--indicators", "macros", "--out", (base / "bad").string()}).code == 2);
}

TEST_CASE("qr encode and decode") {
    const auto dir = scratch("qr");
    const auto urls = synth::generate_urls(100, true, 2);
    {
        std::ofstream f(dir / "urls.txt");
        for (const auto& u : urls) f << u << "\n";
    }
    REQUIRE(invoke({"qr", "encode", "--input", (dir / "urls.txt").string(), "--out", (dir / "img").string()}).code == 0);
    CHECK(lines(slurp(dir / "img" / "manifest.csv")).size() == 101);
    const auto d = invoke({"qr", "decode", (dir / "img" / "*.pgm").string()});
    CHECK(d.code == 0);
    const auto out = lines(d.out);
    REQUIRE(out.size() == 100);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].substr(out[i].find('\t') + 1) == urls[i]);

    std::ofstream(dir / "blank.pgm", std::ios::binary) << "P5\n40 40\n255\n" << std::string(1600, '\xff');
    CHECK(invoke({"qr", "decode", (dir / "blank.pgm").string()}).code == 4);
    CHECK(invoke({"qr", "decode", (dir / "missing.pgm").string()}).code == 2);
}

TEST_CASE("url tools") {
    const auto dir = scratch("url");
    {
        std::ofstream b(dir / "b.txt"), m(dir / "m.txt");
        for (const auto& u : synth::generate_urls(30, false, 1)) b << u << "\n";
        for (const auto& u : synth::generate_urls(30, true, 1)) m << u << "\n";
    }
    const auto e = invoke({"url", "effects", "--benign", (dir / "b.txt").string(), "--malicious", (dir / "m.txt").string()});
    CHECK(e.code == 0);
    CHECK(lines(e.out).size() == 11);
    const auto f = invoke({"url", "features", "https://a.example/x?y=1"});
    CHECK(f.code == 0);
    CHECK(lines(f.out).size() == 2);
}

TEST_CASE("analyze prints a report") {
    const auto dir = scratch("analyze");
    std::ofstream(dir / "x.html") << "<html><body><a href=\"/a\">a</a></body></html>";
    const auto r = invoke({"analyze", (dir / "x.html").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("\"features\"") != std::string::npos);
    CHECK(invoke({"analyze", (dir / "none.html").string()}).code == 2);
}
