#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phishlens {

enum class FormatKind { docx, xlsx, pdf, html, url };

std::string_view format_name(FormatKind kind) noexcept;
std::optional<FormatKind> parse_format(std::string_view name) noexcept;

/// Ordered, named feature columns for one format. Column order is part of the
/// schema version: a reordering or rename requires bumping `version`.
class FeatureSchema {
public:
    FeatureSchema(FormatKind format, std::vector<std::string> columns, int version);

    FormatKind format() const noexcept { return format_; }
    int version() const noexcept { return version_; }
    const std::vector<std::string>& columns() const noexcept { return columns_; }
    std::size_t size() const noexcept { return columns_.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const noexcept;

    friend bool operator==(const FeatureSchema& a, const FeatureSchema& b) {
        return a.format_ == b.format_ && a.version_ == b.version_ && a.columns_ == b.columns_;
    }

private:
    FormatKind format_;
    std::vector<std::string> columns_;
    int version_;
};

using SchemaPtr = std::shared_ptr<const FeatureSchema>;

/// Builds a schema holding a subset of `base`'s columns, in the given order.
/// Throws Error(schema_mismatch) for unknown names.
SchemaPtr project_schema(const FeatureSchema& base, std::span<const std::string> names);

class FeatureVector {
public:
    explicit FeatureVector(SchemaPtr schema);
    FeatureVector(SchemaPtr schema, std::vector<double> values);

    const FeatureSchema& schema() const noexcept { return *schema_; }
    const SchemaPtr& schema_ptr() const noexcept { return schema_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t i) const { return values_.at(i); }
    double get(std::string_view name) const;
    void set(std::string_view name, double value);
    void set(std::size_t index, double value);

    /// Replaces non-finite values with 0; returns the offending column names.
    std::vector<std::string> sanitize();

    /// Values of `target`'s columns looked up by name in this vector.
    FeatureVector project(const SchemaPtr& target) const;

private:
    SchemaPtr schema_;
    std::vector<double> values_;
};

struct AnalysisReport {
    std::string source_path;
    FormatKind format;
    FeatureVector features;
    std::vector<std::string> warnings;
    bool parse_failed = false;
};

enum class FileKind { docx, xlsx, pdf, html, qr_image, unknown };

std::string_view file_kind_name(FileKind kind) noexcept;

/// Feature rows sharing one schema with binary labels (0 benign, 1 malicious).
struct LabeledDataset {
    SchemaPtr schema;
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;

    std::size_t size() const noexcept { return rows.size(); }
    std::size_t width() const noexcept { return schema ? schema->size() : 0; }
    std::size_t count_label(int label) const noexcept;

    void add(const FeatureVector& x, int label);
    void add(std::vector<double> values, int label);

    /// Rows restricted to `target`'s columns, in its order.
    LabeledDataset project(const SchemaPtr& target) const;
    LabeledDataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const LabeledDataset& a, const LabeledDataset& b);
};

}  // namespace phishlens
