#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phishlens/features.hpp"

namespace phishlens {

/// Lexical split of a URL: scheme at the first "://", then host up to the
/// first "/" and path up to the first "?". Not RFC 3986; never fails.
struct UrlParts {
    std::string_view scheme;     // empty when there is no "://"
    std::string_view authority;  // userinfo@host:port
    std::string_view host;       // lowercase not applied; port and userinfo removed
    std::string_view path;       // includes the leading "/"
    std::string_view query;      // excludes "?", fragment removed
    std::optional<long> port;
};

UrlParts split_url(std::string_view url) noexcept;
bool is_ipv4_host(std::string_view host) noexcept;
/// max(0, labels - 2) for names; 0 for IPv4 literals.
std::size_t subdomain_count(std::string_view host) noexcept;
/// Characters of `s` from the set / - = ? & : . _
std::size_t punct_char_count(std::string_view s) noexcept;
bool is_shortener_host(std::string_view host, const std::vector<std::string>& shorteners);

#define PHISHLENS_URL_FEATURES(X) \
    X(length)                     \
    X(digit_ratio)                \
    X(symbol_ratio)               \
    X(ipv4_like)                  \
    X(path_length)                \
    X(query_length)               \
    X(https_start)                \
    X(subdomain_count)            \
    X(punct_char_count)           \
    X(shortener_flag)

struct UrlFeatures {
#define PHISHLENS_DECLARE(name) double name = 0;
    PHISHLENS_URL_FEATURES(PHISHLENS_DECLARE)
#undef PHISHLENS_DECLARE

    FeatureVector to_vector() const;
};

const SchemaPtr& url_schema();

/// Throws Error(invalid_argument) on empty input.
UrlFeatures url_features(std::string_view url, const std::vector<std::string>& shorteners);
UrlFeatures url_features(std::string_view url);

struct EffectSize {
    double cohens_d = 0;
    double mean_a = 0, mean_b = 0;
    double pooled_sd = 0;
    std::size_t n_a = 0, n_b = 0;
};

/// Throws Error(insufficient_data) when a group has fewer than 2 values and
/// Error(degenerate_groups) when the pooled standard deviation is 0.
EffectSize cohens_d(const std::vector<double>& group_a, const std::vector<double>& group_b);

struct EffectRow {
    std::string feature;
    std::optional<EffectSize> effect;  // nullopt when undefined
    std::string reason;
};

/// One row per UrlFeatures column, malicious minus benign.
std::vector<EffectRow> effect_size_report(const std::vector<std::string>& benign_urls,
                                          const std::vector<std::string>& malicious_urls);

/// CSV with columns feature,cohens_d,mean_malicious,mean_benign,pooled_sd,n_malicious,n_benign,note
std::string effects_to_csv(const std::vector<EffectRow>& rows);

}  // namespace phishlens
