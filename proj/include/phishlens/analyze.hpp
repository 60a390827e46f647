#pragma once

#include <optional>
#include <string>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/features.hpp"

namespace phishlens {

/// Runs the analyzer for `format`. URL input is the whole buffer as one URL.
AnalysisReport analyze(ByteView data, FormatKind format, const AnalyzerConfig& config = AnalyzerConfig::defaults(),
                       const std::optional<std::string>& page_host = std::nullopt, std::string source_path = {});

/// Full-schema and selected-schema descriptors per format.
const SchemaPtr& full_schema(FormatKind format);
const SchemaPtr& selected_schema(FormatKind format);

/// Format implied by a sniffed file kind (nullopt for QR images and unknown).
std::optional<FormatKind> format_for(FileKind kind) noexcept;

}  // namespace phishlens
