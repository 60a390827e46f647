#include "phishlens/dataset_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "phishlens/error.hpp"

namespace phishlens {
namespace {

std::vector<std::string> split_row(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.emplace_back(line.substr(start));
            break;
        }
        cells.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

std::string format_value(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::size_t write_dataset_csv(const LabeledDataset& ds, std::ostream& out) {
    if (!ds.schema) throw Error(Errc::invalid_argument, "dataset without schema");
    std::string text;
    for (const auto& c : ds.schema->columns()) {
        text += c;
        text += ',';
    }
    text += "label\n";
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (double v : ds.rows[r]) {
            text += format_value(v);
            text += ',';
        }
        text += std::to_string(ds.labels[r]);
        text += '\n';
    }
    out << text;
    if (!out) throw Error(Errc::io_error, "failed writing dataset CSV");
    return text.size();
}

std::size_t write_features_csv(const std::vector<FeatureVector>& rows, const FeatureSchema& schema,
                               std::ostream& out) {
    std::string text;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (i) text += ',';
        text += schema.columns()[i];
    }
    text += '\n';
    for (const auto& row : rows) {
        if (!(row.schema() == schema)) throw Error(Errc::schema_mismatch, "row schema differs from CSV schema");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) text += ',';
            text += format_value(row[i]);
        }
        text += '\n';
    }
    out << text;
    if (!out) throw Error(Errc::io_error, "failed writing feature CSV");
    return text.size();
}

std::vector<std::string> read_csv_header(std::istream& in) {
    std::string line;
    if (!next_line(in, line)) throw Error(Errc::header_mismatch, "empty CSV");
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    return split_row(line);
}

LabeledDataset read_dataset_csv(std::istream& in, const SchemaPtr& schema) {
    auto header = read_csv_header(in);
    std::vector<std::string> expected = schema->columns();
    expected.emplace_back("label");
    if (header != expected) {
        std::string detail = "expected " + std::to_string(expected.size()) + " columns ending in 'label', got " +
                             std::to_string(header.size());
        for (std::size_t i = 0; i < std::min(header.size(), expected.size()); ++i) {
            if (header[i] != expected[i]) {
                detail += "; first difference at column " + std::to_string(i + 1) + " ('" + header[i] +
                          "' vs '" + expected[i] + "')";
                break;
            }
        }
        throw Error(Errc::header_mismatch, detail);
    }

    LabeledDataset ds{schema, {}, {}};
    std::string line;
    std::size_t row_no = 0;
    while (next_line(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        auto cells = split_row(line);
        if (cells.size() != expected.size())
            throw Error(Errc::parse_error, "row " + std::to_string(row_no) + ": expected " +
                                               std::to_string(expected.size()) + " cells, got " +
                                               std::to_string(cells.size()));
        std::vector<double> values(schema->size());
        for (std::size_t c = 0; c < schema->size(); ++c) {
            const std::string& cell = cells[c];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(v))
                throw Error(Errc::parse_error, "row " + std::to_string(row_no) + ", column '" + expected[c] +
                                                   "': not a number: '" + cell + "'");
            values[c] = v;
        }
        const std::string& lab = cells.back();
        if (lab != "0" && lab != "1")
            throw Error(Errc::label_out_of_range, "row " + std::to_string(row_no) + ": label '" + lab + "'");
        ds.rows.push_back(std::move(values));
        ds.labels.push_back(lab == "1" ? 1 : 0);
    }
    return ds;
}

}  // namespace phishlens
