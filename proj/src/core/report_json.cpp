#include "phishlens/report_json.hpp"

namespace phishlens {

nlohmann::ordered_json report_to_json(const AnalysisReport& report) {
    nlohmann::ordered_json j;
    j["source_path"] = report.source_path;
    j["format"] = std::string(format_name(report.format));
    nlohmann::ordered_json features = nlohmann::ordered_json::object();
    const auto& cols = report.features.schema().columns();
    for (std::size_t i = 0; i < cols.size(); ++i) features[cols[i]] = report.features[i];
    j["features"] = std::move(features);
    j["warnings"] = report.warnings;
    j["parse_failed"] = report.parse_failed;
    return j;
}

}  // namespace phishlens
