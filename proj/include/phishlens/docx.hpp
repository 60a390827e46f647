#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/features.hpp"

namespace phishlens {

/// Structural counters over all XML parts of a Word package. The first 20
/// count attribute names, the last 16 count element names; '_' stands in for
/// ':' in column names (struct_r_id counts r:id).
inline constexpr std::array<std::string_view, 36> kDocxStructCounters = {
    "ContentType", "PartName", "Extension", "Default",  "Override",   "Target",     "TargetMode",   "Id",
    "Type",        "name",     "val",       "pos",      "id",         "w",          "h",            "r:id",
    "r:embed",     "xmlns",    "standalone", "encoding", "w:p",       "w:r",        "w:t",          "w:tbl",
    "w:tr",        "w:tc",     "w:hyperlink", "w:drawing", "w:object", "w:fldSimple", "w:instrText", "w:sectPr",
    "w:pict",      "w:binData", "Relationship", "Types"};

struct DocxFeatures {
    double file_size = 0;
    double entropy = 0;
    double macro_present = 0;
    double vba_keywords_count = 0;
    double dde_present = 0;
    double ole_object_count = 0;
    double ole_object_type_count = 0;
    std::array<double, 36> struct_counters{};

    double struct_counter(std::string_view name) const;
    FeatureVector to_vector() const;
};

struct DocxAnalysis {
    DocxFeatures features;
    std::vector<std::string> warnings;
    bool parse_failed = false;
};

/// 43 columns: metadata, macro, DDE, OLE, then struct_* counters.
const SchemaPtr& docx_schema();
/// The 10 selected columns in ranking order.
const SchemaPtr& docx_selected_schema();

DocxAnalysis extract_docx(ByteView data, const AnalyzerConfig& config = AnalyzerConfig::defaults());
AnalysisReport analyze_docx(ByteView data, const AnalyzerConfig& config = AnalyzerConfig::defaults(),
                            std::string source_path = {});
FeatureVector project_top10_docx(const DocxFeatures& features);

/// Total case-insensitive keyword hits over `source`.
std::size_t count_vba_keywords(std::string_view source, const std::vector<std::string>& keywords);

}  // namespace phishlens
