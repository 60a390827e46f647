#pragma once

#include <string>
#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/features.hpp"

namespace phishlens {

#define PHISHLENS_PDF_FEATURES(X)  \
    X(file_size)                   \
    X(page_count)                  \
    X(is_encrypted)                \
    X(metadata_size)               \
    X(text_length)                 \
    X(title_chars)                 \
    X(embedded_image_count)        \
    X(ocr_fallback_flag)           \
    X(stream_count)                \
    X(endstream_count)             \
    X(avg_stream_size)             \
    X(entropy_of_streams)          \
    X(objstm_count)                \
    X(object_count)                \
    X(font_object_count)           \
    X(xref_table_count)            \
    X(xref_entry_count)            \
    X(embedded_file_count)         \
    X(avg_embedded_file_size)      \
    X(name_obfuscation_count)      \
    X(nested_filter_count)         \
    X(javascript_count)            \
    X(js_count)                    \
    X(uri_count)                   \
    X(launch_count)                \
    X(openaction_count)            \
    X(aa_count)                    \
    X(submitform_count)            \
    X(goto_remote_count)           \
    X(acroform_present)            \
    X(xfa_present)                 \
    X(jbig2_count)                 \
    X(richmedia_count)             \
    X(total_filters)               \
    X(lzw_count)                   \
    X(risky_cooccurrence_count)    \
    X(valid_pdf_header)            \
    X(trailer_present)             \
    X(startxref_present)           \
    X(nonstandard_port_flag)

struct PdfFeatures {
#define PHISHLENS_DECLARE(name) double name = 0;
    PHISHLENS_PDF_FEATURES(PHISHLENS_DECLARE)
#undef PHISHLENS_DECLARE

    FeatureVector to_vector() const;
};

struct PdfAnalysis {
    PdfFeatures features;
    std::vector<std::string> warnings;
    bool parse_failed = false;
};

const SchemaPtr& pdf_schema();
const SchemaPtr& pdf_selected_schema();

PdfAnalysis extract_pdf(ByteView data);
AnalysisReport analyze_pdf(ByteView data, std::string source_path = {});
FeatureVector project_top10_pdf(const PdfFeatures& features);

}  // namespace phishlens
