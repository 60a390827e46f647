#include "phishlens/features.hpp"

#include <cmath>
#include <unordered_set>

#include "phishlens/error.hpp"

namespace phishlens {

std::string_view format_name(FormatKind kind) noexcept {
    switch (kind) {
        case FormatKind::docx: return "docx";
        case FormatKind::xlsx: return "xlsx";
        case FormatKind::pdf: return "pdf";
        case FormatKind::html: return "html";
        case FormatKind::url: return "url";
    }
    return "unknown";
}

std::optional<FormatKind> parse_format(std::string_view name) noexcept {
    if (name == "docx") return FormatKind::docx;
    if (name == "xlsx") return FormatKind::xlsx;
    if (name == "pdf") return FormatKind::pdf;
    if (name == "html") return FormatKind::html;
    if (name == "url") return FormatKind::url;
    return std::nullopt;
}

std::string_view file_kind_name(FileKind kind) noexcept {
    switch (kind) {
        case FileKind::docx: return "docx";
        case FileKind::xlsx: return "xlsx";
        case FileKind::pdf: return "pdf";
        case FileKind::html: return "html";
        case FileKind::qr_image: return "qr_image";
        case FileKind::unknown: return "unknown";
    }
    return "unknown";
}

FeatureSchema::FeatureSchema(FormatKind format, std::vector<std::string> columns, int version)
    : format_(format), columns_(std::move(columns)), version_(version) {
    std::unordered_set<std::string> seen;
    for (const auto& c : columns_) {
        if (!seen.insert(c).second) throw Error(Errc::invalid_argument, "duplicate schema column '" + c + "'");
    }
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const noexcept {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    return std::nullopt;
}

SchemaPtr project_schema(const FeatureSchema& base, std::span<const std::string> names) {
    for (const auto& n : names) {
        if (!base.index_of(n)) throw Error(Errc::schema_mismatch, "column '" + n + "' not in base schema");
    }
    return std::make_shared<const FeatureSchema>(base.format(), std::vector<std::string>(names.begin(), names.end()),
                                                 base.version());
}

FeatureVector::FeatureVector(SchemaPtr schema) : schema_(std::move(schema)), values_(schema_->size(), 0.0) {}

FeatureVector::FeatureVector(SchemaPtr schema, std::vector<double> values)
    : schema_(std::move(schema)), values_(std::move(values)) {
    if (values_.size() != schema_->size())
        throw Error(Errc::schema_mismatch, "vector length " + std::to_string(values_.size()) +
                                               " != schema width " + std::to_string(schema_->size()));
}

double FeatureVector::get(std::string_view name) const {
    auto idx = schema_->index_of(name);
    if (!idx) throw Error(Errc::schema_mismatch, "no column '" + std::string(name) + "'");
    return values_[*idx];
}

void FeatureVector::set(std::string_view name, double value) {
    auto idx = schema_->index_of(name);
    if (!idx) throw Error(Errc::schema_mismatch, "no column '" + std::string(name) + "'");
    values_[*idx] = value;
}

void FeatureVector::set(std::size_t index, double value) { values_.at(index) = value; }

std::vector<std::string> FeatureVector::sanitize() {
    std::vector<std::string> bad;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            values_[i] = 0.0;
            bad.push_back(schema_->columns()[i]);
        }
    }
    return bad;
}

FeatureVector FeatureVector::project(const SchemaPtr& target) const {
    std::vector<double> out;
    out.reserve(target->size());
    for (const auto& name : target->columns()) out.push_back(get(name));
    return FeatureVector(target, std::move(out));
}

std::size_t LabeledDataset::count_label(int label) const noexcept {
    std::size_t n = 0;
    for (int l : labels) n += (l == label);
    return n;
}

void LabeledDataset::add(const FeatureVector& x, int label) {
    if (!schema || !(x.schema() == *schema)) throw Error(Errc::schema_mismatch, "row schema differs from dataset schema");
    add(std::vector<double>(x.values().begin(), x.values().end()), label);
}

void LabeledDataset::add(std::vector<double> values, int label) {
    if (values.size() != width()) throw Error(Errc::schema_mismatch, "row width differs from dataset schema");
    if (label != 0 && label != 1) throw Error(Errc::label_out_of_range, "label " + std::to_string(label));
    rows.push_back(std::move(values));
    labels.push_back(label);
}

LabeledDataset LabeledDataset::project(const SchemaPtr& target) const {
    std::vector<std::size_t> idx;
    for (const auto& name : target->columns()) {
        auto i = schema->index_of(name);
        if (!i) throw Error(Errc::schema_mismatch, "column '" + name + "' not in dataset");
        idx.push_back(*i);
    }
    LabeledDataset out{target, {}, labels};
    out.rows.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<double> p;
        p.reserve(idx.size());
        for (auto i : idx) p.push_back(r[i]);
        out.rows.push_back(std::move(p));
    }
    return out;
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out{schema, {}, {}};
    out.rows.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (auto i : indices) {
        out.rows.push_back(rows.at(i));
        out.labels.push_back(labels.at(i));
    }
    return out;
}

bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
    if (!a.schema || !b.schema) return a.schema == b.schema && a.rows == b.rows && a.labels == b.labels;
    return *a.schema == *b.schema && a.rows == b.rows && a.labels == b.labels;
}

}  // namespace phishlens
