#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/features.hpp"

namespace phishlens {

// Lexical VBA metrics. Structure group first, then advanced syntax patterns.
#define PHISHLENS_MACRO_METRICS(X) \
    X(line_count)                  \
    X(char_count)                  \
    X(token_count)                 \
    X(vocab_size)                  \
    X(max_line_length)             \
    X(avg_line_length)             \
    X(comment_line_count)          \
    X(sub_count)                   \
    X(function_count)              \
    X(dim_count)                   \
    X(chr_count)                   \
    X(arithmetic_operator_count)   \
    X(string_literal_count)        \
    X(concat_operator_count)       \
    X(hex_literal_count)           \
    X(max_string_literal_length)   \
    X(suspicious_keyword_count)

struct MacroMetrics {
#define PHISHLENS_DECLARE(name) double name = 0;
    PHISHLENS_MACRO_METRICS(PHISHLENS_DECLARE)
#undef PHISHLENS_DECLARE
};

MacroMetrics compute_macro_metrics(std::string_view source,
                                   const std::vector<std::string>& keywords = AnalyzerConfig::defaults().vba_keywords);

#define PHISHLENS_XLSX_FEATURES(X)           \
    X(file_size)                             \
    X(entropy_of_file)                       \
    X(sheet_count)                           \
    X(max_rows)                              \
    X(max_cols)                              \
    X(numeric_cell_count)                    \
    X(string_cell_count)                     \
    X(empty_cell_ratio)                      \
    X(avg_cell_length)                       \
    X(max_cell_length)                       \
    X(entropy_of_text)                       \
    X(formula_count)                         \
    X(hyperlink_count)                       \
    X(macro_present)                         \
    X(macro_module_count)                    \
    X(macro_line_count)                      \
    X(macro_char_count)                      \
    X(macro_token_count)                     \
    X(macro_vocab_size)                      \
    X(macro_max_line_length)                 \
    X(macro_avg_line_length)                 \
    X(macro_comment_line_count)              \
    X(macro_sub_count)                       \
    X(macro_function_count)                  \
    X(macro_dim_count)                       \
    X(macro_chr_count)                       \
    X(macro_arithmetic_operator_count)       \
    X(macro_string_literal_count)            \
    X(macro_concat_operator_count)           \
    X(macro_hex_literal_count)               \
    X(macro_max_string_literal_length)       \
    X(macro_suspicious_keyword_count)        \
    X(remote_template_present)               \
    X(external_reference_count)              \
    X(url_in_cell_count)                     \
    X(api_keyword_count)                     \
    X(auto_exec_name_present)                \
    X(hidden_sheet_count)                    \
    X(very_hidden_sheet_count)               \
    X(protected_sheet_count)                 \
    X(chart_sheet_count)                     \
    X(defined_name_count)                    \
    X(suspicious_defined_name_count)         \
    X(embedded_image_count)                  \
    X(largest_image_bytes)                   \
    X(image_type_count)                      \
    X(drawing_part_count)                    \
    X(media_entry_count)

struct XlsxFeatures {
#define PHISHLENS_DECLARE(name) double name = 0;
    PHISHLENS_XLSX_FEATURES(PHISHLENS_DECLARE)
#undef PHISHLENS_DECLARE

    FeatureVector to_vector() const;
};

struct XlsxAnalysis {
    XlsxFeatures features;
    std::vector<std::string> warnings;
    bool parse_failed = false;
};

const SchemaPtr& xlsx_schema();
const SchemaPtr& xlsx_selected_schema();

XlsxAnalysis extract_xlsx(ByteView data, const AnalyzerConfig& config = AnalyzerConfig::defaults());
AnalysisReport analyze_xlsx(ByteView data, const AnalyzerConfig& config = AnalyzerConfig::defaults(),
                            std::string source_path = {});
FeatureVector project_top10_xlsx(const XlsxFeatures& features);

}  // namespace phishlens
