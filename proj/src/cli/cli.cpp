#include "phishlens/cli/cli.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "phishlens/analyze.hpp"
#include "phishlens/config.hpp"
#include "phishlens/dataset_csv.hpp"
#include "phishlens/error.hpp"
#include "phishlens/ml/importance.hpp"
#include "phishlens/ml/metrics.hpp"
#include "phishlens/ml/tree.hpp"
#include "phishlens/qr.hpp"
#include "phishlens/report_json.hpp"
#include "phishlens/sniff.hpp"
#include "phishlens/synth/corpus.hpp"
#include "phishlens/url.hpp"

namespace phishlens::cli {
namespace {

namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(Errc code) {
    switch (code) {
        case Errc::io_error:
        case Errc::invalid_argument: return kExitIo;
        case Errc::header_mismatch:
        case Errc::schema_mismatch:
        case Errc::label_out_of_range:
        case Errc::empty_dataset:
        case Errc::parse_error: return kExitSchema;
        default: return kExitDecode;
    }
}

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(Errc::io_error, "read failed: " + path.string());
    return data;
}

void write_file(const fs::path& path, ByteView data) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
}

void write_text(const fs::path& path, std::string_view text) { write_file(path, as_bytes(text)); }

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty()) lines.emplace_back(t);
    }
    return lines;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

/// Files named by paths, directories (recursive) and filename globs, sorted and de-duplicated.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& specs) {
    std::set<fs::path> found;
    for (const auto& spec : specs) {
        const fs::path p(spec);
        std::error_code ec;
        if (spec.find_first_of("*?[") != std::string::npos) {
            const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
            const std::string pattern = p.filename().string();
            for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
                if (it->is_regular_file(ec) && fnmatch(pattern.c_str(), it->path().filename().c_str(), 0) == 0)
                    found.insert(it->path().lexically_normal());
            }
        } else if (fs::is_directory(p, ec)) {
            for (fs::recursive_directory_iterator it(p, ec), end; !ec && it != end; it.increment(ec)) {
                if (it->is_regular_file(ec)) found.insert(it->path().lexically_normal());
            }
        } else {
            found.insert(p.lexically_normal());  // missing files surface as read failures
        }
    }
    return {found.begin(), found.end()};
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads (0 = hardware concurrency).
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
    std::size_t workers = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, std::max<std::size_t>(n, 1));
    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
    };
    if (workers <= 1) return body();
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
}

FormatKind require_format(const std::string& name) {
    auto f = parse_format(name);
    if (!f) throw UsageError("unknown format '" + name + "'");
    return *f;
}

/// Finds the known schema whose columns equal `header` (minus a trailing "label").
SchemaPtr schema_for_header(std::vector<std::string> header) {
    if (!header.empty() && header.back() == "label") header.pop_back();
    for (auto f : {FormatKind::docx, FormatKind::xlsx, FormatKind::pdf, FormatKind::html, FormatKind::url}) {
        if (full_schema(f)->columns() == header) return full_schema(f);
        if (selected_schema(f)->columns() == header) return selected_schema(f);
    }
    throw Error(Errc::schema_mismatch, "CSV header matches no known feature schema");
}

LabeledDataset load_dataset(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    auto schema = schema_for_header(read_csv_header(in));
    in.clear();
    in.seekg(0);
    return read_dataset_csv(in, schema);
}

LabeledDataset load_dataset(const fs::path& path, const SchemaPtr& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    return read_dataset_csv(in, schema);
}

void require_two_classes(const LabeledDataset& ds) {
    if (ds.size() == 0) throw Error(Errc::empty_dataset, "dataset has no rows");
    if (ds.count_label(0) == 0 || ds.count_label(1) == 0)
        throw Error(Errc::empty_dataset, "dataset holds a single class; need benign and malicious rows");
}

std::string schema_label(const FeatureSchema& s) {
    return std::string(format_name(s.format())) + ", " + std::to_string(s.size()) + " features";
}

// --- scan -----------------------------------------------------------------

struct ScanOptions {
    std::vector<std::string> inputs;
    std::string format = "auto";
    std::string features = "selected";
    std::string out;
    std::string reports;
    std::string labels;
    std::string host;
    int jobs = 0;
};

std::map<fs::path, int> load_labels(const fs::path& path) {
    std::map<fs::path, int> labels;
    const fs::path base = path.parent_path();
    bool first = true;
    for (const auto& line : read_lines(path)) {
        auto comma = line.rfind(',');
        if (comma == std::string::npos) throw Error(Errc::parse_error, "labels: expected path,label: " + line);
        std::string name = line.substr(0, comma);
        std::string value(trim(std::string_view(line).substr(comma + 1)));
        if (first && value == "label") {
            first = false;
            continue;
        }
        first = false;
        if (value != "0" && value != "1") throw Error(Errc::label_out_of_range, "labels: bad label '" + value + "'");
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
        fs::path p(name);
        if (p.is_relative()) p = base / p;
        labels[fs::weakly_canonical(p)] = value == "1" ? 1 : 0;
    }
    return labels;
}

int cmd_scan(const ScanOptions& opt, std::ostream& out, std::ostream& err) {
    auto inputs = collect_inputs(opt.inputs);
    if (!opt.labels.empty()) {
        const auto labels_path = fs::weakly_canonical(opt.labels);
        std::erase_if(inputs, [&](const fs::path& p) { return fs::weakly_canonical(p) == labels_path; });
    }
    if (inputs.empty()) {
        err << "scan: no inputs\n";
        return kExitIo;
    }
    std::optional<FormatKind> fixed;
    if (opt.format != "auto") {
        fixed = require_format(opt.format);
        if (*fixed == FormatKind::url) throw UsageError("scan does not accept --format url; use 'url features'");
    }
    const bool selected = opt.features == "selected";
    if (!selected && opt.features != "full") throw UsageError("--features must be full or selected");
    if (!fixed && opt.out.empty()) throw UsageError("--format auto writes one CSV per format and needs --out DIR");
    const auto config = config_from_environment();
    const std::optional<std::string> host = opt.host.empty() ? std::nullopt : std::optional(opt.host);
    std::map<fs::path, int> labels;
    if (!opt.labels.empty()) labels = load_labels(opt.labels);

    struct Result {
        std::optional<AnalysisReport> report;
        std::string error;
    };
    std::vector<Result> results(inputs.size());
    parallel_for(inputs.size(), opt.jobs, [&](std::size_t i) {
        const auto& path = inputs[i];
        Bytes data;
        try {
            data = read_file(path);
        } catch (const Error& e) {
            results[i].error = e.what();
            if (fixed) {
                AnalysisReport r{path.string(), *fixed, FeatureVector(full_schema(*fixed)), {e.what()}, true};
                results[i].report = std::move(r);
            }
            return;
        }
        auto format = fixed ? fixed : format_for(sniff_file_kind(data));
        if (!format) {
            results[i].error = "skipped: unrecognized file type";
            return;
        }
        try {
            results[i].report = analyze(data, *format, config, host, path.string());
        } catch (const std::exception& e) {
            AnalysisReport r{path.string(), *format, FeatureVector(full_schema(*format)), {e.what()}, true};
            r.features.set("file_size", static_cast<double>(data.size()));
            results[i].report = std::move(r);
        }
    });

    std::size_t io_failures = 0, parse_failures = 0, skipped = 0;
    std::map<FormatKind, std::vector<std::size_t>> by_format;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& r = results[i];
        if (!r.error.empty() && r.error.rfind("skipped", 0) == 0) {
            ++skipped;
            err << "scan: " << inputs[i].string() << ": " << r.error << "\n";
            continue;
        }
        if (!r.error.empty()) {
            ++io_failures;
            err << "scan: " << r.error << "\n";
        }
        if (!r.report) continue;
        if (r.report->parse_failed) ++parse_failures;
        by_format[r.report->format].push_back(i);
    }

    fs::path reports_dir;
    if (!opt.reports.empty()) reports_dir = opt.reports;
    else if (!opt.out.empty()) reports_dir = fixed ? fs::path(opt.out + ".reports") : fs::path(opt.out) / "reports";

    for (const auto& [format, idx] : by_format) {
        const SchemaPtr schema = selected ? selected_schema(format) : full_schema(format);
        std::ostringstream csv;
        if (labels.empty() && opt.labels.empty()) {
            std::vector<FeatureVector> rows;
            for (auto i : idx) rows.push_back(results[i].report->features.project(schema));
            write_features_csv(rows, *schema, csv);
        } else {
            LabeledDataset ds{schema, {}, {}};
            for (auto i : idx) {
                auto it = labels.find(fs::weakly_canonical(inputs[i]));
                if (it == labels.end()) throw Error(Errc::label_out_of_range, "no label for " + inputs[i].string());
                ds.add(results[i].report->features.project(schema), it->second);
            }
            write_dataset_csv(ds, csv);
        }
        if (opt.out.empty()) {
            out << csv.str();
        } else {
            const fs::path target = fixed ? fs::path(opt.out) : fs::path(opt.out) / (std::string(format_name(format)) + ".csv");
            write_text(target, csv.str());
            err << "scan: wrote " << idx.size() << " rows to " << target.string() << "\n";
        }
        if (!reports_dir.empty()) {
            for (auto i : idx) {
                char prefix[16];
                std::snprintf(prefix, sizeof prefix, "%05zu_", i);
                write_text(reports_dir / (prefix + inputs[i].filename().string() + ".json"),
                           report_to_json(*results[i].report).dump(2) + "\n");
            }
        }
    }
    err << "scan: " << inputs.size() << " inputs, " << parse_failures << " parse failures, " << io_failures
        << " I/O failures, " << skipped << " skipped\n";
    return io_failures ? kExitIo : kExitOk;
}

// --- synth ----------------------------------------------------------------

struct SynthOptions {
    std::string format;
    std::size_t count = 100;
    std::uint64_t seed = 7;
    std::string out;
    std::vector<std::string> indicators;
    bool no_indicators = false;
};

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
    synth::SynthConfig config;
    config.format = require_format(opt.format);
    config.count_per_class = opt.count;
    config.seed = opt.seed;
    if (opt.no_indicators) config.indicators = std::set<synth::Indicator>{};
    if (!opt.indicators.empty()) {
        std::set<synth::Indicator> set;
        for (const auto& name : opt.indicators) {
            auto i = synth::parse_indicator(name);
            if (!i) throw UsageError("unknown indicator '" + name + "'");
            set.insert(*i);
        }
        config.indicators = set;
    }
    err << "synth: format=" << opt.format << " count=" << opt.count << " seed=" << opt.seed << "\n";
    const auto files = synth::generate_corpus(config);
    const fs::path dir(opt.out);
    fs::create_directories(dir);
    std::string labels = "path,label\n";
    for (const auto& f : files) {
        write_file(dir / f.name, f.data);
        labels += f.name + "," + std::to_string(f.label) + "\n";
    }
    write_text(dir / "labels.csv", labels);
    out << "wrote " << files.size() << " files and labels.csv to " << dir.string() << "\n";
    return kExitOk;
}

// --- train / evaluate / rank -----------------------------------------------

struct LearnOptions {
    std::string data;
    std::string out;
    std::string model;
    std::string report;
    std::uint64_t seed = 7;
    int trees = 100;
    int jobs = 0;
    int k = 0;
    double train_fraction = 0.7;
    bool holdout = false;
};

ml::ForestParams forest_params(const LearnOptions& opt) {
    ml::ForestParams p;
    p.n_trees = opt.trees;
    p.seed = opt.seed;
    p.jobs = opt.jobs;
    return p;
}

int cmd_train(const LearnOptions& opt, std::ostream& out, std::ostream& err) {
    err << "train: seed=" << opt.seed << " trees=" << opt.trees << "\n";
    const auto ds = load_dataset(opt.data);
    require_two_classes(ds);
    const auto [train_idx, test_idx] = ml::stratified_split(ds, opt.train_fraction, opt.seed);
    const auto train = ds.subset(train_idx);
    const auto test = ds.subset(test_idx);
    require_two_classes(train);
    const auto tree = ml::train_decision_tree(train);
    const auto forest = ml::train_random_forest(train, forest_params(opt));
    std::vector<ml::MetricsRow> rows{{"Decision Tree", ml::evaluate(tree, test)},
                                     {"Random Forest", ml::evaluate(forest, test)}};
    out << ml::metrics_table(schema_label(*ds.schema) + ", " + std::to_string(train.size()) + " train / " +
                                 std::to_string(test.size()) + " test",
                             rows);
    if (forest.oob_accuracy) out << "Random Forest OOB accuracy: " << *forest.oob_accuracy << "\n";
    if (!opt.report.empty()) write_text(opt.report, ml::metrics_json(rows));
    if (!opt.out.empty()) {
        write_text(opt.out, ml::serialize_model(forest));
        err << "train: wrote " << opt.out << "\n";
    }
    return kExitOk;
}

int cmd_evaluate(const LearnOptions& opt, std::ostream& out, std::ostream& err) {
    const auto text = read_file(opt.model);
    const auto model = ml::load_model(as_chars(text));
    auto ds = load_dataset(opt.data, model.schema);
    if (opt.holdout) {
        err << "evaluate: holdout split seed=" << opt.seed << "\n";
        ds = ds.subset(ml::stratified_split(ds, opt.train_fraction, opt.seed).second);
    }
    std::vector<ml::MetricsRow> rows{{model.trees.size() == 1 ? "Decision Tree" : "Random Forest", ml::evaluate(model, ds)}};
    out << ml::metrics_table(schema_label(*model.schema) + ", " + std::to_string(ds.size()) + " rows", rows);
    if (!opt.report.empty()) write_text(opt.report, ml::metrics_json(rows));
    return kExitOk;
}

int cmd_rank(const LearnOptions& opt, std::ostream& out, std::ostream& err) {
    err << "rank: seed=" << opt.seed << " trees=" << opt.trees << "\n";
    const auto ds = load_dataset(opt.data);
    require_two_classes(ds);
    const auto [train_idx, test_idx] = ml::stratified_split(ds, opt.train_fraction, opt.seed);
    const auto train = ds.subset(train_idx);
    const auto test = ds.subset(test_idx);
    const auto forest = ml::train_random_forest(train, forest_params(opt));
    std::size_t k = opt.k > 0 ? static_cast<std::size_t>(opt.k) : selected_schema(ds.schema->format())->size();
    k = std::min(k, ds.width());
    const std::vector<ml::ImportanceRanking> rankings{ml::rank_features_gini(forest),
                                                      ml::rank_features_permutation(forest, test, opt.seed)};
    for (const auto& r : rankings) {
        const std::string method(ml::method_name(r.method));
        const auto top = ml::select_top_k(r, k, *ds.schema);
        std::string cols;
        for (const auto& c : top->columns()) cols += (cols.empty() ? "" : ",") + c;
        out << "top-" << k << " (" << method << "): " << cols << "\n";
        if (!opt.out.empty()) {
            write_text(fs::path(opt.out) / ("ranking_" + method + ".csv"), ml::ranking_csv(r));
            write_text(fs::path(opt.out) / ("top" + std::to_string(k) + "_" + method + ".txt"), cols + "\n");
        } else {
            out << ml::ranking_csv(r);
        }
    }
    return kExitOk;
}

// --- qr -------------------------------------------------------------------

struct QrOptions {
    std::vector<std::string> items;
    std::string input;
    std::string out;
    std::string ec = "M";
    int module_px = 8;
    int quiet = 4;
};

int cmd_qr_encode(const QrOptions& opt, std::ostream& out, std::ostream& err) {
    auto level = qr::parse_ec_level(opt.ec);
    if (!level) throw UsageError("--ec must be L, M, Q or H");
    std::vector<std::string> payloads = opt.items;
    if (!opt.input.empty()) {
        auto lines = read_lines(opt.input);
        payloads.insert(payloads.end(), lines.begin(), lines.end());
    }
    if (payloads.empty()) {
        err << "qr encode: no inputs\n";
        return kExitIo;
    }
    if (opt.out.empty()) throw UsageError("qr encode needs --out DIR");
    const fs::path dir(opt.out);
    fs::create_directories(dir);
    std::string manifest = "index,url,version,ec_level\n";
    int failures = 0;
    for (std::size_t i = 0; i < payloads.size(); ++i) {
        try {
            const auto m = qr::encode(as_bytes(payloads[i]), *level);
            char name[24];
            std::snprintf(name, sizeof name, "%05zu.pgm", i);
            write_file(dir / name, qr::write_pgm(qr::render(m, opt.module_px, opt.quiet)));
            manifest += std::to_string(i) + "," + csv_field(payloads[i]) + "," + std::to_string(m.version) + "," +
                        std::string(qr::ec_level_name(m.ec_level)) + "\n";
        } catch (const Error& e) {
            ++failures;
            err << "qr encode: item " << i << ": " << e.what() << "\n";
        }
    }
    write_text(dir / "manifest.csv", manifest);
    out << "encoded " << payloads.size() - failures << " of " << payloads.size() << " payloads into " << dir.string() << "\n";
    return failures ? kExitDecode : kExitOk;
}

int cmd_qr_decode(const QrOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<std::string> specs = opt.items;
    if (!opt.input.empty()) specs.push_back(opt.input);
    const auto inputs = collect_inputs(specs);
    std::vector<fs::path> images;
    for (const auto& p : inputs)
        if (p.extension() == ".pgm" || inputs.size() == 1) images.push_back(p);
    if (images.empty()) {
        err << "qr decode: no inputs\n";
        return kExitIo;
    }
    int code = kExitOk;
    for (const auto& path : images) {
        try {
            const auto data = read_file(path);
            const auto result = qr::decode_detailed(qr::read_pgm(data));
            out << path.string() << "\t" << as_chars(result.payload) << "\n";
        } catch (const Error& e) {
            err << "qr decode: " << path.string() << ": " << e.what() << "\n";
            code = std::max(code, e.code() == Errc::io_error ? kExitIo : kExitDecode);
        }
    }
    return code;
}

// --- url ------------------------------------------------------------------

struct UrlOptions {
    std::vector<std::string> items;
    std::string input;
    std::string benign;
    std::string malicious;
    std::string out;
};

int cmd_url_features(const UrlOptions& opt, std::ostream& out, std::ostream& err) {
    std::vector<std::string> urls = opt.items;
    if (!opt.input.empty()) {
        auto lines = read_lines(opt.input);
        urls.insert(urls.end(), lines.begin(), lines.end());
    }
    if (urls.empty()) {
        err << "url features: no inputs\n";
        return kExitIo;
    }
    const auto config = config_from_environment();
    std::vector<FeatureVector> rows;
    for (const auto& u : urls) rows.push_back(url_features(u, config.url_shorteners).to_vector());
    std::ostringstream csv;
    write_features_csv(rows, *url_schema(), csv);
    if (opt.out.empty()) out << csv.str();
    else write_text(opt.out, csv.str());
    return kExitOk;
}

int cmd_url_effects(const UrlOptions& opt, std::ostream& out, std::ostream&) {
    if (opt.benign.empty() || opt.malicious.empty()) throw UsageError("url effects needs --benign and --malicious");
    const auto rows = effect_size_report(read_lines(opt.benign), read_lines(opt.malicious));
    const auto csv = effects_to_csv(rows);
    if (opt.out.empty()) out << csv;
    else write_text(opt.out, csv);
    return kExitOk;
}

// --- analyze --------------------------------------------------------------

struct AnalyzeOptions {
    std::string path;
    std::string format = "auto";
    std::string features = "full";
    std::string host;
};

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream&) {
    const auto data = read_file(opt.path);
    std::optional<FormatKind> format;
    if (opt.format == "auto") {
        format = format_for(sniff_file_kind(data));
        if (!format) throw Error(Errc::unsupported_mode, "unrecognized file type: " + opt.path);
    } else {
        format = require_format(opt.format);
    }
    auto report = analyze(data, *format, config_from_environment(),
                          opt.host.empty() ? std::nullopt : std::optional(opt.host), opt.path);
    if (opt.features == "selected") report.features = report.features.project(selected_schema(*format));
    out << report_to_json(report).dump(2) << "\n";
    return report.parse_failed ? kExitDecode : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Static phishing and malware feature extraction, classification and QR/URL tools", "phishlens"};
    app.require_subcommand(1);
    std::function<int()> action;

    ScanOptions scan;
    auto* scan_cmd = app.add_subcommand("scan", "Extract feature CSVs (and JSON reports) from files");
    scan_cmd->add_option("inputs", scan.inputs, "Files, directories or filename globs")->required();
    scan_cmd->add_option("--format", scan.format, "auto, docx, xlsx, pdf or html")->capture_default_str();
    scan_cmd->add_option("--features", scan.features, "full or selected")->capture_default_str();
    scan_cmd->add_option("--out", scan.out, "CSV file (fixed format) or directory (auto)");
    scan_cmd->add_option("--reports", scan.reports, "Directory for per-file JSON reports");
    scan_cmd->add_option("--labels", scan.labels, "path,label CSV; adds a label column");
    scan_cmd->add_option("--host", scan.host, "Page host for HTML internal/external links");
    scan_cmd->add_option("--jobs", scan.jobs, "Worker threads (0 = all cores)");
    scan_cmd->callback([&] { action = [&] { return cmd_scan(scan, out, err); }; });

    SynthOptions syn;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded benign/malicious corpus");
    synth_cmd->add_option("--format", syn.format, "docx, xlsx, pdf or html")->required();
    synth_cmd->add_option("--count", syn.count, "Files per class")->capture_default_str()->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", syn.seed)->capture_default_str();
    synth_cmd->add_option("--out", syn.out, "Output directory")->required();
    synth_cmd->add_option("--indicators", syn.indicators, "Indicators to inject (default: all for the format)")
        ->delimiter(',');
    synth_cmd->add_flag("--no-indicators", syn.no_indicators, "Inject no indicators");
    synth_cmd->callback([&] { action = [&] { return cmd_synth(syn, out, err); }; });

    LearnOptions learn;
    auto add_learn = [&](CLI::App* cmd) {
        cmd->add_option("--seed", learn.seed)->capture_default_str();
        cmd->add_option("--trees", learn.trees, "Random forest size")->capture_default_str()->check(CLI::PositiveNumber);
        cmd->add_option("--jobs", learn.jobs, "Training threads (0 = all cores)");
        cmd->add_option("--train-fraction", learn.train_fraction)->capture_default_str()->check(CLI::Range(0.05, 0.95));
    };
    auto* train_cmd = app.add_subcommand("train", "Train decision tree and random forest on a labeled CSV");
    train_cmd->add_option("--data", learn.data, "Labeled feature CSV")->required();
    train_cmd->add_option("--out", learn.out, "Random forest model file (JSON)");
    train_cmd->add_option("--report", learn.report, "Metrics JSON file");
    add_learn(train_cmd);
    train_cmd->callback([&] { action = [&] { return cmd_train(learn, out, err); }; });

    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a model file on a labeled CSV");
    eval_cmd->add_option("--model", learn.model)->required();
    eval_cmd->add_option("--data", learn.data)->required();
    eval_cmd->add_option("--report", learn.report, "Metrics JSON file");
    eval_cmd->add_flag("--holdout", learn.holdout, "Only the test part of the seeded stratified split");
    add_learn(eval_cmd);
    eval_cmd->callback([&] { action = [&] { return cmd_evaluate(learn, out, err); }; });

    auto* rank_cmd = app.add_subcommand("rank", "Gini and permutation feature rankings with top-k projection");
    rank_cmd->add_option("--data", learn.data)->required();
    rank_cmd->add_option("--k", learn.k, "Columns to keep (default: the format's selected-set size)");
    rank_cmd->add_option("--out", learn.out, "Output directory for ranking CSVs");
    add_learn(rank_cmd);
    rank_cmd->callback([&] { action = [&] { return cmd_rank(learn, out, err); }; });

    QrOptions qro;
    auto* qr_cmd = app.add_subcommand("qr", "QR code generation and decoding");
    qr_cmd->require_subcommand(1);
    auto* qr_enc = qr_cmd->add_subcommand("encode", "Encode payloads to NNNNN.pgm plus manifest.csv");
    qr_enc->add_option("payloads", qro.items);
    qr_enc->add_option("--input", qro.input, "File with one payload per line");
    qr_enc->add_option("--out", qro.out, "Output directory");
    qr_enc->add_option("--ec", qro.ec, "L, M, Q or H")->capture_default_str();
    qr_enc->add_option("--module-px", qro.module_px)->capture_default_str()->check(CLI::Range(1, 64));
    qr_enc->add_option("--quiet-zone", qro.quiet)->capture_default_str()->check(CLI::Range(0, 64));
    qr_enc->callback([&] { action = [&] { return cmd_qr_encode(qro, out, err); }; });
    auto* qr_dec = qr_cmd->add_subcommand("decode", "Decode PGM images");
    qr_dec->add_option("images", qro.items, "PGM files, directories or globs");
    qr_dec->callback([&] { action = [&] { return cmd_qr_decode(qro, out, err); }; });

    UrlOptions urlo;
    auto* url_cmd = app.add_subcommand("url", "Lexical URL features and effect sizes");
    url_cmd->require_subcommand(1);
    auto* url_feat = url_cmd->add_subcommand("features", "Feature CSV for URLs");
    url_feat->add_option("urls", urlo.items);
    url_feat->add_option("--input", urlo.input, "File with one URL per line");
    url_feat->add_option("--out", urlo.out, "CSV file (default stdout)");
    url_feat->callback([&] { action = [&] { return cmd_url_features(urlo, out, err); }; });
    auto* url_eff = url_cmd->add_subcommand("effects", "Cohen's d per feature, malicious minus benign");
    url_eff->add_option("--benign", urlo.benign, "File with benign URLs")->required();
    url_eff->add_option("--malicious", urlo.malicious, "File with malicious URLs")->required();
    url_eff->add_option("--out", urlo.out, "CSV file (default stdout)");
    url_eff->callback([&] { action = [&] { return cmd_url_effects(urlo, out, err); }; });

    AnalyzeOptions ana;
    auto* analyze_cmd = app.add_subcommand("analyze", "Print the JSON report for one file");
    analyze_cmd->add_option("path", ana.path)->required();
    analyze_cmd->add_option("--format", ana.format)->capture_default_str();
    analyze_cmd->add_option("--features", ana.features, "full or selected")->capture_default_str();
    analyze_cmd->add_option("--host", ana.host);
    analyze_cmd->callback([&] { action = [&] { return cmd_analyze(ana, out, err); }; });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << e.what() << "\n";
            return kExitOk;
        }
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }

    try {
        return action ? action() : kExitIo;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

}  // namespace phishlens::cli
