#include "phishlens/url.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "phishlens/bytes.hpp"
#include "phishlens/config.hpp"
#include "phishlens/dataset_csv.hpp"
#include "phishlens/error.hpp"

namespace phishlens {

UrlParts split_url(std::string_view url) noexcept {
    UrlParts p;
    std::string_view rest = url;
    if (auto s = url.find("://"); s != std::string_view::npos) {
        p.scheme = url.substr(0, s);
        rest = url.substr(s + 3);
        auto auth_end = rest.find_first_of("/?#");
        p.authority = rest.substr(0, auth_end);
        rest = auth_end == std::string_view::npos ? std::string_view{} : rest.substr(auth_end);
    }
    if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    auto q = rest.find('?');
    p.path = rest.substr(0, q);
    if (q != std::string_view::npos) p.query = rest.substr(q + 1);

    std::string_view host = p.authority;
    if (auto at = host.rfind('@'); at != std::string_view::npos) host.remove_prefix(at + 1);
    std::string_view port_text;
    if (!host.empty() && host.front() == '[') {
        auto close = host.find(']');
        if (close != std::string_view::npos) {
            if (close + 1 < host.size() && host[close + 1] == ':') port_text = host.substr(close + 2);
            host = host.substr(0, close + 1);
        }
    } else if (auto colon = host.rfind(':'); colon != std::string_view::npos) {
        port_text = host.substr(colon + 1);
        host = host.substr(0, colon);
    }
    p.host = host;
    if (!port_text.empty()) {
        long port = 0;
        auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
        if (ec == std::errc() && ptr == port_text.data() + port_text.size()) p.port = port;
    }
    return p;
}

bool is_ipv4_host(std::string_view host) noexcept {
    int groups = 0;
    std::size_t i = 0;
    while (true) {
        std::size_t start = i;
        int value = 0;
        while (i < host.size() && host[i] >= '0' && host[i] <= '9' && i - start < 3) value = value * 10 + (host[i++] - '0');
        std::size_t len = i - start;
        if (len == 0 || value > 255) return false;
        ++groups;
        if (i == host.size()) return groups == 4;
        if (host[i] != '.' || groups == 4) return false;
        ++i;
    }
}

std::size_t subdomain_count(std::string_view host) noexcept {
    if (host.empty() || is_ipv4_host(host)) return 0;
    while (!host.empty() && host.back() == '.') host.remove_suffix(1);
    std::size_t labels = 1;
    for (char c : host)
        if (c == '.') ++labels;
    return labels > 2 ? labels - 2 : 0;
}

std::size_t punct_char_count(std::string_view s) noexcept {
    std::size_t n = 0;
    for (char c : s)
        if (std::string_view("/-=?&:._").find(c) != std::string_view::npos) ++n;
    return n;
}

bool is_shortener_host(std::string_view host, const std::vector<std::string>& shorteners) {
    for (const auto& s : shorteners) {
        if (iequals(host, s)) return true;
        if (host.size() > s.size() && host[host.size() - s.size() - 1] == '.' && iends_with(host, s)) return true;
    }
    return false;
}

const SchemaPtr& url_schema() {
    static const SchemaPtr schema = [] {
        std::vector<std::string> cols;
#define PHISHLENS_NAME(name) cols.emplace_back(#name);
        PHISHLENS_URL_FEATURES(PHISHLENS_NAME)
#undef PHISHLENS_NAME
        return std::make_shared<const FeatureSchema>(FormatKind::url, std::move(cols), 1);
    }();
    return schema;
}

FeatureVector UrlFeatures::to_vector() const {
    std::vector<double> v;
#define PHISHLENS_VALUE(name) v.push_back(name);
    PHISHLENS_URL_FEATURES(PHISHLENS_VALUE)
#undef PHISHLENS_VALUE
    return FeatureVector(url_schema(), std::move(v));
}

UrlFeatures url_features(std::string_view url, const std::vector<std::string>& shorteners) {
    if (url.empty()) throw Error(Errc::invalid_argument, "empty URL");
    UrlFeatures f;
    auto parts = split_url(url);
    double digits = 0, symbols = 0;
    for (char c : url) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= '0' && u <= '9') digits += 1;
        else if (!std::isalpha(u) && c != '.' && c != '/') symbols += 1;
    }
    f.length = static_cast<double>(url.size());
    f.digit_ratio = digits / f.length;
    f.symbol_ratio = symbols / f.length;
    f.ipv4_like = is_ipv4_host(parts.host) ? 1 : 0;
    f.path_length = static_cast<double>(parts.path.size());
    f.query_length = static_cast<double>(parts.query.size());
    f.https_start = istarts_with(url, "https://") ? 1 : 0;
    f.subdomain_count = static_cast<double>(subdomain_count(parts.host));
    f.punct_char_count = static_cast<double>(punct_char_count(url));
    f.shortener_flag = is_shortener_host(parts.host, shorteners) ? 1 : 0;
    return f;
}

UrlFeatures url_features(std::string_view url) { return url_features(url, AnalyzerConfig::defaults().url_shorteners); }

EffectSize cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw Error(Errc::insufficient_data, "each group needs at least 2 values (got " + std::to_string(a.size()) +
                                                 " and " + std::to_string(b.size()) + ")");
    auto mean_var = [](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::pair{m, ss / static_cast<double>(v.size() - 1)};
    };
    auto [ma, va] = mean_var(a);
    auto [mb, vb] = mean_var(b);
    double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double pooled = std::sqrt(((na - 1) * va + (nb - 1) * vb) / (na + nb - 2));
    if (!(pooled > 1e-12 * std::max({1.0, std::fabs(ma), std::fabs(mb)})))
        throw Error(Errc::degenerate_groups, "pooled standard deviation is 0");
    return {(ma - mb) / pooled, ma, mb, pooled, a.size(), b.size()};
}

std::vector<EffectRow> effect_size_report(const std::vector<std::string>& benign_urls,
                                          const std::vector<std::string>& malicious_urls) {
    if (benign_urls.size() < 2 || malicious_urls.size() < 2)
        throw Error(Errc::insufficient_data, "each URL group needs at least 2 entries");
    const auto& schema = *url_schema();
    std::vector<std::vector<double>> mal(schema.size()), ben(schema.size());
    for (const auto& u : malicious_urls) {
        auto v = url_features(u).to_vector();
        for (std::size_t i = 0; i < schema.size(); ++i) mal[i].push_back(v[i]);
    }
    for (const auto& u : benign_urls) {
        auto v = url_features(u).to_vector();
        for (std::size_t i = 0; i < schema.size(); ++i) ben[i].push_back(v[i]);
    }
    std::vector<EffectRow> rows;
    for (std::size_t i = 0; i < schema.size(); ++i) {
        EffectRow row{schema.columns()[i], std::nullopt, {}};
        try {
            row.effect = cohens_d(mal[i], ben[i]);
        } catch (const Error& e) {
            row.reason = std::string(errc_name(e.code()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string effects_to_csv(const std::vector<EffectRow>& rows) {
    std::string out = "feature,cohens_d,mean_malicious,mean_benign,pooled_sd,n_malicious,n_benign,note\n";
    for (const auto& r : rows) {
        out += r.feature;
        if (r.effect) {
            const auto& e = *r.effect;
            out += "," + format_value(e.cohens_d) + "," + format_value(e.mean_a) + "," + format_value(e.mean_b) + "," +
                   format_value(e.pooled_sd) + "," + std::to_string(e.n_a) + "," + std::to_string(e.n_b) + ",\n";
        } else {
            out += ",,,,,,," + r.reason + "\n";
        }
    }
    return out;
}

}  // namespace phishlens
