#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/features.hpp"

namespace phishlens {

#define PHISHLENS_HTML_FEATURES(X)  \
    X(file_size)                    \
    X(line_count)                   \
    X(entropy)                      \
    X(whitespace_ratio)             \
    X(html_whitespace_ratio)        \
    X(tag_count)                    \
    X(unique_tag_count)             \
    X(max_nesting_depth)            \
    X(comment_count)                \
    X(noscript_count)               \
    X(object_tag_count)             \
    X(script_block_count)           \
    X(embedded_js_count)            \
    X(external_script_count)        \
    X(total_script_characters)      \
    X(script_entropy)               \
    X(eval_count)                   \
    X(location_redirect_count)      \
    X(form_count)                   \
    X(iframe_count)                 \
    X(hidden_iframe_count)          \
    X(meta_refresh_count)           \
    X(base64_occurrence_count)      \
    X(hex_escape_count)             \
    X(js_escape_count)              \
    X(suspicious_keyword_count)     \
    X(keyword_text_ratio)           \
    X(url_count)                    \
    X(internal_link_count)          \
    X(external_link_count)          \
    X(min_link_length)              \
    X(max_link_length)              \
    X(avg_link_length)              \
    X(url_digit_count)              \
    X(url_punct_char_count)         \
    X(avg_subdomain_count)          \
    X(ip_url_count)                 \
    X(shortener_url_count)          \
    X(img_tag_count)                \
    X(event_handler_count)

struct HtmlFeatures {
#define PHISHLENS_DECLARE(name) double name = 0;
    PHISHLENS_HTML_FEATURES(PHISHLENS_DECLARE)
#undef PHISHLENS_DECLARE

    FeatureVector to_vector() const;
};

struct HtmlAnalysis {
    HtmlFeatures features;
    std::vector<std::string> warnings;
    bool parse_failed = false;
};

const SchemaPtr& html_schema();
const SchemaPtr& html_selected_schema();

/// `page_host` decides internal vs external links; without it a <base href>
/// host is used, and failing that relative links count as internal and
/// absolute ones as external.
HtmlAnalysis extract_html(ByteView data, const std::optional<std::string>& page_host = std::nullopt,
                          const AnalyzerConfig& config = AnalyzerConfig::defaults());
AnalysisReport analyze_html(ByteView data, const std::optional<std::string>& page_host = std::nullopt,
                            const AnalyzerConfig& config = AnalyzerConfig::defaults(), std::string source_path = {});
FeatureVector project_top13_html(const HtmlFeatures& features);

}  // namespace phishlens
