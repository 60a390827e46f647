#pragma once

#include <string>

#include <json.hpp>

#include "phishlens/features.hpp"

namespace phishlens {

/// {source_path, format, features: {name: value}, warnings, parse_failed}
nlohmann::ordered_json report_to_json(const AnalysisReport& report);

}  // namespace phishlens
