#include "phishlens/analyze.hpp"

#include "phishlens/docx.hpp"
#include "phishlens/error.hpp"
#include "phishlens/html.hpp"
#include "phishlens/pdf.hpp"
#include "phishlens/url.hpp"
#include "phishlens/xlsx.hpp"

namespace phishlens {

AnalysisReport analyze(ByteView data, FormatKind format, const AnalyzerConfig& config,
                       const std::optional<std::string>& page_host, std::string source_path) {
    switch (format) {
        case FormatKind::docx: return analyze_docx(data, config, std::move(source_path));
        case FormatKind::xlsx: return analyze_xlsx(data, config, std::move(source_path));
        case FormatKind::pdf: return analyze_pdf(data, std::move(source_path));
        case FormatKind::html: return analyze_html(data, page_host, config, std::move(source_path));
        case FormatKind::url: {
            auto text = std::string(trim(as_chars(data)));
            if (text.empty())
                return {std::move(source_path), FormatKind::url, FeatureVector(url_schema()), {"empty URL"}, true};
            return {std::move(source_path), FormatKind::url, url_features(text, config.url_shorteners).to_vector(), {}, false};
        }
    }
    throw Error(Errc::invalid_argument, "unknown format");
}

const SchemaPtr& full_schema(FormatKind format) {
    switch (format) {
        case FormatKind::docx: return docx_schema();
        case FormatKind::xlsx: return xlsx_schema();
        case FormatKind::pdf: return pdf_schema();
        case FormatKind::html: return html_schema();
        case FormatKind::url: return url_schema();
    }
    throw Error(Errc::invalid_argument, "unknown format");
}

const SchemaPtr& selected_schema(FormatKind format) {
    switch (format) {
        case FormatKind::docx: return docx_selected_schema();
        case FormatKind::xlsx: return xlsx_selected_schema();
        case FormatKind::pdf: return pdf_selected_schema();
        case FormatKind::html: return html_selected_schema();
        case FormatKind::url: return url_schema();
    }
    throw Error(Errc::invalid_argument, "unknown format");
}

std::optional<FormatKind> format_for(FileKind kind) noexcept {
    switch (kind) {
        case FileKind::docx: return FormatKind::docx;
        case FileKind::xlsx: return FormatKind::xlsx;
        case FileKind::pdf: return FormatKind::pdf;
        case FileKind::html: return FormatKind::html;
        default: return std::nullopt;
    }
}

}  // namespace phishlens
