#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace phishlens {

/// Keyword lists and thresholds shared by the analyzers. Defaults match the
/// shipped config/default.conf; a file named by PHISHLENS_CONFIG overrides
/// individual keys.
struct AnalyzerConfig {
    int version = 1;
    std::vector<std::string> vba_keywords;
    std::vector<std::string> vba_api_keywords;
    std::vector<std::string> html_keywords;
    std::vector<std::string> url_shorteners;
    std::size_t base64_min_run = 24;

    static const AnalyzerConfig& defaults();
};

/// Parses `key = value` lines ('#' comments, comma-separated lists) on top of
/// the defaults. Throws Error(parse_error) naming the offending line.
AnalyzerConfig parse_config(std::string_view text);
AnalyzerConfig load_config_file(const std::filesystem::path& path);

/// Defaults, or the file named by PHISHLENS_CONFIG when set.
AnalyzerConfig config_from_environment();

}  // namespace phishlens
