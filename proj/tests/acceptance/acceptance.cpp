// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "phishlens/analyze.hpp"
#include "phishlens/bytes.hpp"
#include "phishlens/docx.hpp"
#include "phishlens/error.hpp"
#include "phishlens/html.hpp"
#include "phishlens/ml/importance.hpp"
#include "phishlens/ml/metrics.hpp"
#include "phishlens/ml/rng.hpp"
#include "phishlens/ml/tree.hpp"
#include "phishlens/pdf.hpp"
#include "phishlens/qr.hpp"
#include "phishlens/synth/corpus.hpp"
#include "phishlens/url.hpp"
#include "phishlens/xlsx.hpp"

using namespace phishlens;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// --- watchdog --------------------------------------------------------------

std::atomic<long long> watch_start{0};  // ns since epoch of the running input, 0 when idle
std::atomic<bool> watch_stop{false};
std::string watch_label;

long long now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now().time_since_epoch()).count();
}

void watchdog() {
    while (!watch_stop.load()) {
        const long long s = watch_start.load();
        if (s != 0 && now_ns() - s > 1'000'000'000LL) {
            std::printf("FAIL criterion 8: input exceeded the 1 s watchdog (%s)\n", watch_label.c_str());
            std::fflush(stdout);
            std::_Exit(1);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
}

// --- 1 ---------------------------------------------------------------------

void metric_oracle() {
    const auto t0 = Clock::now();
    struct Row {
        double p, r, f1;
    };
    const Row rows[] = {{0.9301, 0.8401, 0.8828}, {0.9856, 0.9860, 0.9858}, {0.9917, 0.9924, 0.9920},
                        {0.9939, 0.9922, 0.9930}, {0.9606, 0.9611, 0.9609}};
    bool ok = true;
    double worst = 0;
    for (const auto& row : rows) {
        const double d = std::abs(ml::f1_score(row.p, row.r) - row.f1);
        worst = std::max(worst, d);
        ok = ok && d <= 1e-4;
    }
    const double t = seconds_since(t0);
    report(1, ok && t < 1.0, "F1 from precision/recall, max deviation " + fmt("%.2e", worst) + ", " + fmt("%.4f", t) + " s");
}

// --- 2 ---------------------------------------------------------------------

struct Oracle {
    std::string feature;
    double accuracy = 0;
};

// Best accuracy of a rule "x <= t predicts one class" over every column and midpoint.
Oracle threshold_oracle(const LabeledDataset& ds) {
    Oracle best;
    const std::size_t n = ds.size();
    const double pos = static_cast<double>(ds.count_label(1));
    for (std::size_t j = 0; j < ds.width(); ++j) {
        std::vector<std::pair<double, int>> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = {ds.rows[i][j], ds.labels[i]};
        std::sort(col.begin(), col.end());
        double left_pos = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            if (i > 0) left_pos += col[i - 1].second;
            if (i > 0 && i < n && col[i].first == col[i - 1].first) continue;
            // left side predicted benign, right malicious (or the reverse)
            const double left = static_cast<double>(i);
            const double correct = (left - left_pos) + (pos - left_pos);
            const double acc = std::max(correct, static_cast<double>(n) - correct) / static_cast<double>(n);
            if (acc > best.accuracy) best = {ds.schema->columns()[j], acc};
        }
    }
    return best;
}

void detection_on_synth() {
    bool all = true;
    std::ostringstream detail;
    for (auto format : {FormatKind::docx, FormatKind::xlsx, FormatKind::pdf, FormatKind::html}) {
        const auto t0 = Clock::now();
        const auto corpus = synth::generate_corpus({format, 1000, 7, std::nullopt});
        LabeledDataset ds{selected_schema(format), {}, {}};
        for (const auto& f : corpus) ds.add(analyze(f.data, format).features.project(ds.schema), f.label);
        const auto oracle = threshold_oracle(ds);
        const double floor = format == FormatKind::html ? 0.90 : 0.95;
        const auto [train_idx, test_idx] = ml::stratified_split(ds, 0.7, 7);
        ml::ForestParams params;
        params.seed = 7;
        const auto model = ml::train_random_forest(ds.subset(train_idx), params);
        const auto m = ml::evaluate(model, ds.subset(test_idx));
        const double t = seconds_since(t0);
        const bool ok = oracle.accuracy >= floor && m.f1_macro >= floor && t < 60.0;
        all = all && ok;
        detail << format_name(format) << " k=" << ds.width() << " macro-F1 " << fmt("%.4f", m.f1_macro) << " (oracle "
               << oracle.feature << " " << fmt("%.4f", oracle.accuracy) << ", " << fmt("%.1f", t) << " s); ";
    }
    report(2, all, detail.str());
}

// --- 3 ---------------------------------------------------------------------

void schema_conformance() {
    const std::vector<std::string> docx_top{"ole_object_count", "ole_object_type_count", "macro_present", "dde_present",
                                            "vba_keywords_count", "entropy", "struct_ContentType", "struct_PartName",
                                            "file_size", "struct_pos"};
    const std::vector<std::string> xlsx_top{"entropy_of_text",   "macro_chr_count",   "macro_vocab_size",
                                            "macro_arithmetic_operator_count",     "macro_token_count",
                                            "macro_max_line_length", "remote_template_present", "numeric_cell_count",
                                            "string_cell_count", "avg_cell_length"};
    const std::vector<std::string> pdf_top{"text_length",  "total_filters", "title_chars",     "file_size",
                                           "object_count", "stream_count",  "endstream_count", "metadata_size",
                                           "valid_pdf_header", "entropy_of_streams"};
    const std::vector<std::string> html_top{"url_punct_char_count", "tag_count", "whitespace_ratio", "entropy",
                                            "form_count", "embedded_js_count", "html_whitespace_ratio",
                                            "script_entropy", "min_link_length", "external_link_count",
                                            "total_script_characters", "internal_link_count", "url_digit_count"};
    struct Case {
        FormatKind format;
        std::size_t width;
        const std::vector<std::string>* top;
    };
    const Case cases[] = {{FormatKind::docx, 43, &docx_top},
                          {FormatKind::xlsx, 48, &xlsx_top},
                          {FormatKind::pdf, 40, &pdf_top},
                          {FormatKind::html, 40, &html_top}};
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : cases) {
        for (const auto& f : synth::generate_corpus({c.format, 3, 11, std::nullopt})) {
            const auto r = analyze(f.data, c.format);
            ok = ok && r.features.size() == c.width;
            ok = ok && r.features.project(selected_schema(c.format)).schema().columns() == *c.top;
        }
        ok = ok && full_schema(c.format)->size() == c.width && selected_schema(c.format)->columns() == *c.top;
        detail << format_name(c.format) << " " << c.width << "/" << c.top->size() << " ";
    }
    report(3, ok, "full/selected widths " + detail.str());
}

// --- 4 ---------------------------------------------------------------------

Bytes random_bytes(ml::Rng& rng, std::size_t n) {
    Bytes out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng.below(256));
    return out;
}

void flip_codewords(qr::QrMatrix& m, int block, int count, ml::Rng& rng) {
    const auto shape = qr::block_layout(m.version, m.ec_level)[static_cast<std::size_t>(block)];
    const auto modules = qr::codeword_modules(m.version);
    std::vector<int> idx(static_cast<std::size_t>(shape.data_codewords + shape.ec_codewords));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    rng.shuffle(idx);
    for (int k = 0; k < count; ++k) {
        const int pos = qr::interleaved_position(m.version, m.ec_level, block, idx[static_cast<std::size_t>(k)]);
        // a random nonzero pattern over the codeword's 8 modules
        const auto pattern = 1 + rng.below(255);
        for (int b = 0; b < 8; ++b)
            if (pattern >> b & 1) {
                const auto [x, y] = modules[static_cast<std::size_t>(pos)][static_cast<std::size_t>(b)];
                m.flip(x, y);
            }
    }
}

void qr_round_trip() {
    const auto t0 = Clock::now();
    ml::Rng rng(2024);
    const qr::EcLevel levels[] = {qr::EcLevel::L, qr::EcLevel::M, qr::EcLevel::Q, qr::EcLevel::H};
    int identity = 0, corrected = 0, beyond = 0, detected = 0, silent = 0, lucky = 0;
    constexpr int kTrials = 1000;
    for (int i = 0; i < kTrials; ++i) {
        const auto level = levels[i % 4];
        const int version = (i / 4) % 10 + 1;
        const std::size_t lo = version == 1 ? 0 : qr::capacity(version - 1, level) + 1;
        const std::size_t hi = qr::capacity(version, level);
        const auto payload = random_bytes(rng, lo + rng.below(hi - lo + 1));
        const auto m = qr::encode(payload, level);
        try {
            if (qr::decode(qr::render(m, 2)) == payload && m.version == version) ++identity;
        } catch (const Error&) {
        }

        // every block at its correction capacity
        auto c = m;
        const auto blocks = qr::block_layout(version, level);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            flip_codewords(c, static_cast<int>(b), blocks[b].ec_codewords / 2, rng);
        try {
            if (qr::decode(qr::render(c, 2)) == payload) ++corrected;
        } catch (const Error&) {
        }

        // one codeword beyond capacity in one block
        auto d = m;
        const int block = static_cast<int>(rng.below(blocks.size()));
        flip_codewords(d, block, blocks[static_cast<std::size_t>(block)].ec_codewords / 2 + 1, rng);
        ++beyond;
        try {
            if (qr::decode(qr::render(d, 2)) == payload) ++lucky;
            else ++silent;
        } catch (const Error&) {
            ++detected;
        }
    }
    const double t = seconds_since(t0);
    const bool ok = identity == kTrials && corrected == kTrials && silent == 0 && t < 30.0;
    report(4, ok,
           "identity " + std::to_string(identity) + "/1000, corrected at capacity " + std::to_string(corrected) +
               "/1000, beyond capacity: " + std::to_string(detected) + " detected, " + std::to_string(lucky) +
               " still correct, " + std::to_string(silent) + " silent misdecodes of " + std::to_string(beyond) + ", " +
               fmt("%.1f", t) + " s");
}

// --- 5 ---------------------------------------------------------------------

void entropy_suite() {
    bool ok = shannon_entropy(Bytes(1000, 42)) == 0.0;
    Bytes all(256);
    for (int i = 0; i < 256; ++i) all[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    ok = ok && std::abs(shannon_entropy(all) - 8.0) < 1e-12;
    const double aab = shannon_entropy("aab");
    ok = ok && std::abs(aab - 0.9183) <= 1e-4;
    ml::Rng rng(5);
    int invariant = 0;
    for (int i = 0; i < 100; ++i) {
        auto buf = random_bytes(rng, 1 + rng.below(2000));
        const double before = shannon_entropy(buf);
        rng.shuffle(buf);
        if (std::abs(shannon_entropy(buf) - before) < 1e-12) ++invariant;
    }
    ok = ok && invariant == 100;
    report(5, ok, "constant 0, uniform 8, \"aab\" " + fmt("%.4f", aab) + ", permutation invariant " +
                      std::to_string(invariant) + "/100");
}

// --- 6 ---------------------------------------------------------------------

LabeledDataset blobs(std::uint64_t seed, std::size_t n, std::size_t width) {
    ml::Rng rng(seed);
    std::vector<std::string> cols;
    for (std::size_t j = 0; j < width; ++j) cols.push_back("x" + std::to_string(j));
    LabeledDataset ds{std::make_shared<const FeatureSchema>(FormatKind::url, cols, 1), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(i % 2);
        std::vector<double> row;
        for (std::size_t j = 0; j < width; ++j) row.push_back(rng.normal(y * 1.2, 1.0));
        ds.add(std::move(row), y);
    }
    return ds;
}

void classifier_properties() {
    const auto ds = blobs(1, 400, 4);
    const auto probe = blobs(2, 2000, 4);

    ml::ForestParams one;
    one.n_trees = 1;
    one.bootstrap = false;
    one.max_features = ml::MaxFeatures::all();
    const auto forest = ml::train_random_forest(ds, one);
    const auto tree = ml::train_decision_tree(ds);
    std::size_t same = 0;
    for (const auto& row : probe.rows) same += forest.predict_row(row) == tree.predict_row(row);
    const bool reduction = same == probe.size();

    ml::ForestParams p;
    p.n_trees = 30;
    p.seed = 99;
    const bool deterministic =
        ml::serialize_model(ml::train_random_forest(ds, p)) == ml::serialize_model(ml::train_random_forest(ds, p));

    auto scaled = ds, scaled_probe = probe;
    const double factors[] = {3.0, 0.001, 250.0, 1.0};
    for (auto* d : {&scaled, &scaled_probe})
        for (auto& row : d->rows)
            for (std::size_t j = 0; j < row.size(); ++j) row[j] *= factors[j];
    const auto fa = ml::train_random_forest(ds, p);
    const auto fb = ml::train_random_forest(scaled, p);
    std::size_t unchanged = 0;
    for (std::size_t i = 0; i < probe.size(); ++i)
        unchanged += fa.predict_row(probe.rows[i]) == fb.predict_row(scaled_probe.rows[i]);
    const bool scaling = unchanged == probe.size();

    LabeledDataset x{std::make_shared<const FeatureSchema>(FormatKind::url, std::vector<std::string>{"a", "b"}, 1), {}, {}};
    x.add({0, 0}, 0);
    x.add({0, 1}, 1);
    x.add({1, 0}, 1);
    x.add({1, 1}, 0);
    ml::TreeParams depth2;
    depth2.max_depth = 2;
    const double xor_acc = ml::evaluate(ml::train_decision_tree(x, depth2), x).accuracy;

    report(6, reduction && deterministic && scaling && xor_acc == 1.0,
           "forest-of-one " + std::to_string(same) + "/" + std::to_string(probe.size()) + ", same-seed serialization " +
               (deterministic ? "identical" : "differs") + ", rescaled predictions unchanged " +
               std::to_string(unchanged) + "/" + std::to_string(probe.size()) + ", XOR accuracy " + fmt("%.2f", xor_acc));
}

// --- 7 ---------------------------------------------------------------------

void importance_sanity() {
    int gini_first = 0, perm_first = 0;
    std::vector<double> noise;
    std::vector<std::string> cols{"copy"};
    for (int j = 1; j <= 9; ++j) cols.push_back("noise" + std::to_string(j));
    const auto schema = std::make_shared<const FeatureSchema>(FormatKind::url, cols, 1);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ml::Rng rng(ml::derive_seed(77, seed));
        LabeledDataset ds{schema, {}, {}};
        for (int i = 0; i < 400; ++i) {
            const int y = i % 2;
            std::vector<double> row{static_cast<double>(y)};
            for (int j = 0; j < 9; ++j) row.push_back(rng.uniform());
            ds.add(std::move(row), y);
        }
        const auto [tr, te] = ml::stratified_split(ds, 0.7, seed);
        ml::ForestParams p;
        p.n_trees = 50;
        p.seed = seed;
        const auto model = ml::train_random_forest(ds.subset(tr), p);
        gini_first += ml::rank_features_gini(model).entries[0].feature == "copy";
        const auto perm = ml::rank_features_permutation(model, ds.subset(te), seed, 5);
        perm_first += perm.entries[0].feature == "copy";
        for (const auto& e : perm.entries)
            if (e.feature != "copy") noise.push_back(e.score);
    }
    std::sort(noise.begin(), noise.end());
    const double median = (noise[noise.size() / 2 - 1] + noise[noise.size() / 2]) / 2;
    report(7, gini_first >= 19 && perm_first >= 19 && median <= 0.01,
           "copy feature first: gini " + std::to_string(gini_first) + "/20, permutation " + std::to_string(perm_first) +
               "/20; median noise permutation score " + fmt("%.4f", median));
}

// --- 8 ---------------------------------------------------------------------

struct FuzzTally {
    std::size_t inputs = 0, reports = 0, typed_errors = 0, untyped = 0;
};

void run_one(const std::string& label, const std::function<void()>& f, FuzzTally& tally) {
    watch_label = label;
    watch_start.store(now_ns());
    ++tally.inputs;
    try {
        f();
        ++tally.reports;
    } catch (const Error&) {
        ++tally.typed_errors;
    } catch (...) {
        ++tally.untyped;
    }
    watch_start.store(0);
}

void robustness() {
    const auto t0 = Clock::now();
    std::thread dog(watchdog);
    ml::Rng rng(8);
    FuzzTally tally;
    const FormatKind formats[] = {FormatKind::docx, FormatKind::xlsx, FormatKind::pdf, FormatKind::html};
    const char* prefixes[] = {"PK\x03\x04", "%PDF-1.7\n", "<html>", "\xD0\xCF\x11\xE0\xA1\xB1\x1A\xE1", ""};
    for (auto format : formats) {
        const std::string name(format_name(format));
        for (int i = 0; i < 10000; ++i) {
            auto data = random_bytes(rng, rng.below(2048));
            if (i % 2) {
                const std::string pre = prefixes[rng.below(5)];
                data.insert(data.begin(), pre.begin(), pre.end());
            }
            run_one(name + " random #" + std::to_string(i), [&] { analyze(data, format); }, tally);
        }
        // truncations at every byte offset and single-region mutations of a valid file per class
        for (int label = 0; label < 2; ++label) {
            const auto file = synth::generate_file({format, 1, 13, std::nullopt}, label, 0).data;
            for (std::size_t n = 0; n <= file.size(); ++n) {
                const ByteView cut(file.data(), n);
                run_one(name + " truncated at " + std::to_string(n), [&] { analyze(cut, format); }, tally);
            }
            for (int k = 0; k < 500; ++k) {
                auto mutated = file;
                const std::size_t flips = 1 + rng.below(16);
                for (std::size_t f = 0; f < flips; ++f) mutated[rng.below(mutated.size())] = static_cast<std::uint8_t>(rng.below(256));
                run_one(name + " mutated #" + std::to_string(k), [&] { analyze(mutated, format); }, tally);
            }
        }
    }
    for (int i = 0; i < 10000; ++i) {
        const auto text = random_bytes(rng, 1 + rng.below(300));
        const std::string url(text.begin(), text.end());
        run_one("url random #" + std::to_string(i), [&] { url_features(url); }, tally);
    }
    for (int i = 0; i < 10000; ++i) {
        const int side = 21 + static_cast<int>(rng.below(60));
        Bytes pgm;
        const std::string header = "P5\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
        pgm.assign(header.begin(), header.end());
        const auto body = random_bytes(rng, static_cast<std::size_t>(side * side));
        pgm.insert(pgm.end(), body.begin(), body.end());
        if (i % 4 == 0) pgm.resize(rng.below(pgm.size() + 1));
        run_one("qr random #" + std::to_string(i), [&] { qr::decode(qr::read_pgm(pgm)); }, tally);
    }
    watch_stop.store(true);
    dog.join();
    const double t = seconds_since(t0);
    report(8, tally.untyped == 0 && t < 300.0,
           std::to_string(tally.inputs) + " inputs: " + std::to_string(tally.reports) + " reports, " +
               std::to_string(tally.typed_errors) + " typed errors, " + std::to_string(tally.untyped) +
               " other failures, no hangs, " + fmt("%.1f", t) + " s");
}

// --- 9 ---------------------------------------------------------------------

void effect_sizes() {
    const double d = cohens_d({2, 4}, {1, 3}).cohens_d;
    ml::Rng rng(9);
    std::vector<std::string> benign, malicious;
    for (int i = 0; i < 200; ++i) {
        std::string b = "https://portal.example.org/", m = "http://login-verify.test/";
        for (int j = 0; j < 12; ++j) {
            b += static_cast<char>('a' + rng.below(26));
            m += rng.below(3) == 0 ? static_cast<char>('0' + rng.below(10)) : static_cast<char>('a' + rng.below(26));
        }
        benign.push_back(b + "?ref=" + std::to_string(rng.below(10)));
        malicious.push_back(m + "?id=" + std::to_string(rng.below(100000)));
    }
    double digit_d = 0;
    for (const auto& row : effect_size_report(benign, malicious))
        if (row.feature == "digit_ratio" && row.effect) digit_d = row.effect->cohens_d;
    report(9, std::abs(d - 0.7071) <= 1e-4 && digit_d > 0,
           "hand example d = " + fmt("%.4f", d) + ", constructed corpus digit_ratio d = " + fmt("%+.3f", digit_d));
}

}  // namespace

int main() {
    metric_oracle();
    detection_on_synth();
    schema_conformance();
    qr_round_trip();
    entropy_suite();
    classifier_properties();
    importance_sanity();
    robustness();
    effect_sizes();
    std::printf("%d of 9 criteria failed\n", failures);
    return failures ? 1 : 0;
}
