#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/features.hpp"

namespace phishlens::synth {

/// Malicious indicators the generator can inject.
enum class Indicator { macros, dde, ole, js_actions, hidden_iframes, remote_templates };

std::string_view indicator_name(Indicator i) noexcept;
std::optional<Indicator> parse_indicator(std::string_view name) noexcept;
/// Indicators meaningful for `format` (all of them are injected by default).
std::set<Indicator> applicable_indicators(FormatKind format);

struct SynthConfig {
    FormatKind format = FormatKind::docx;
    std::size_t count_per_class = 100;
    std::uint64_t seed = 7;
    /// nullopt: every applicable indicator. An indicator that does not apply
    /// to the format is rejected with Error(invalid_argument).
    std::optional<std::set<Indicator>> indicators;
};

struct SynthFile {
    std::string name;  // e.g. "malicious_00012.docx"
    int label = 0;
    Bytes data;
};

std::string_view file_extension(FormatKind format);

/// Benign files first, then malicious; each file depends only on
/// (seed, label, index), so the corpus is reproducible byte for byte.
std::vector<SynthFile> generate_corpus(const SynthConfig& config);

SynthFile generate_file(const SynthConfig& config, int label, std::size_t index);

/// Random text payloads for QR/URL experiments.
std::vector<std::string> generate_urls(std::size_t count, bool malicious, std::uint64_t seed);

}  // namespace phishlens::synth
