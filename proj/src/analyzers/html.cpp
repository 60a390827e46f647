#include "phishlens/html.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "phishlens/url.hpp"

namespace phishlens {
namespace {

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

bool is_void_element(std::string_view n) {
    static const std::set<std::string_view> kVoid = {"area", "base", "br",   "col",   "embed",  "hr",    "img",
                                                     "input", "link", "meta", "param", "source", "track", "wbr"};
    return kVoid.count(n) > 0;
}

struct Attr {
    std::string name;  // lowercased
    std::string value;
};

struct Tag {
    std::string name;  // lowercased
    std::vector<Attr> attrs;
    bool end = false;
    bool self_closing = false;

    const std::string* attr(std::string_view n) const {
        for (const auto& a : attrs)
            if (a.name == n) return &a.value;
        return nullptr;
    }
};

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        auto semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out += '&';
            continue;
        }
        auto ent = s.substr(i + 1, semi - i - 1);
        std::string rep;
        if (ent == "amp") rep = "&";
        else if (ent == "lt") rep = "<";
        else if (ent == "gt") rep = ">";
        else if (ent == "quot") rep = "\"";
        else if (ent == "apos") rep = "'";
        else if (ent == "nbsp") rep = " ";
        else if (!ent.empty() && ent[0] == '#') {
            unsigned long cp = 0;
            bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
            auto digits = ent.substr(hex ? 2 : 1);
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (ec == std::errc() && p == digits.data() + digits.size() && cp > 0 && cp < 0x110000) {
                if (cp < 0x80) {
                    rep = static_cast<char>(cp);
                } else if (cp < 0x800) {
                    rep += static_cast<char>(0xC0 | (cp >> 6));
                    rep += static_cast<char>(0x80 | (cp & 0x3F));
                } else if (cp < 0x10000) {
                    rep += static_cast<char>(0xE0 | (cp >> 12));
                    rep += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    rep += static_cast<char>(0x80 | (cp & 0x3F));
                } else {
                    rep += static_cast<char>(0xF0 | (cp >> 18));
                    rep += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
                    rep += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    rep += static_cast<char>(0x80 | (cp & 0x3F));
                }
            }
        }
        if (rep.empty()) {
            out += '&';
            continue;
        }
        out += rep;
        i = semi;
    }
    return out;
}

// Parses the inside of "<...>" (without the brackets).
Tag parse_tag(std::string_view body) {
    Tag t;
    std::size_t i = 0;
    if (i < body.size() && body[i] == '/') {
        t.end = true;
        ++i;
    }
    std::size_t start = i;
    while (i < body.size() && !is_space(body[i]) && body[i] != '/' && body[i] != '>') ++i;
    t.name = to_lower(body.substr(start, i - start));
    while (i < body.size()) {
        while (i < body.size() && (is_space(body[i]) || body[i] == '/')) {
            if (body[i] == '/' && i + 1 == body.size()) t.self_closing = true;
            ++i;
        }
        if (i >= body.size()) break;
        start = i;
        while (i < body.size() && !is_space(body[i]) && body[i] != '=' && body[i] != '/') ++i;
        if (i == start) {
            ++i;
            continue;
        }
        Attr a{to_lower(body.substr(start, i - start)), {}};
        while (i < body.size() && is_space(body[i])) ++i;
        if (i < body.size() && body[i] == '=') {
            ++i;
            while (i < body.size() && is_space(body[i])) ++i;
            if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
                char q = body[i++];
                auto close = body.find(q, i);
                if (close == std::string_view::npos) close = body.size();
                a.value = decode_entities(body.substr(i, close - i));
                i = std::min(close + 1, body.size());
            } else {
                start = i;
                while (i < body.size() && !is_space(body[i])) ++i;
                auto raw = body.substr(start, i - start);
                if (i == body.size() && raw.ends_with('/')) {
                    raw.remove_suffix(1);
                    t.self_closing = true;
                }
                a.value = decode_entities(raw);
            }
        }
        t.attrs.push_back(std::move(a));
    }
    return t;
}

// End of a tag starting at `lt`, honoring quoted attribute values.
std::size_t tag_end(std::string_view s, std::size_t lt) {
    char quote = 0;
    for (std::size_t i = lt + 1; i < s.size(); ++i) {
        char c = s[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            // quotes only matter inside attribute values (after '=')
            std::size_t k = i;
            while (k > lt && is_space(s[k - 1])) --k;
            if (k > lt && s[k - 1] == '=') quote = c;
        } else if (c == '>') {
            return i;
        }
    }
    return std::string_view::npos;
}

void style_urls(std::string_view css, std::vector<std::string>& out) {
    for (std::size_t p = ifind(css, "url("); p != std::string_view::npos; p = ifind(css, "url(", p + 4)) {
        auto close = css.find(')', p + 4);
        if (close == std::string_view::npos) break;
        auto inner = trim(css.substr(p + 4, close - p - 4));
        if (inner.size() >= 2 && (inner.front() == '"' || inner.front() == '\'') && inner.back() == inner.front())
            inner = inner.substr(1, inner.size() - 2);
        if (!inner.empty()) out.emplace_back(inner);
    }
}

std::optional<long> dimension(const std::string* v) {
    if (!v) return std::nullopt;
    auto t = trim(*v);
    long n = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), n);
    if (ec != std::errc() || p == t.data()) return std::nullopt;
    return n;
}

std::string compact_lower(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!is_space(c)) out += ascii_lower(c);
    return out;
}

std::string normalize_host(std::string_view host) {
    std::string h = to_lower(host);
    while (!h.empty() && h.back() == '.') h.pop_back();
    if (h.starts_with("www.")) h.erase(0, 4);
    return h;
}

bool has_network_authority(std::string_view url) {
    if (url.starts_with("//")) return true;
    auto colon = url.find("://");
    if (colon == std::string_view::npos || colon == 0) return false;
    for (char c : url.substr(0, colon))
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') return false;
    return true;
}

std::string host_of(std::string_view url) {
    if (url.starts_with("//")) return std::string(split_url(std::string("x:") + std::string(url)).host);
    return std::string(split_url(url).host);
}

std::size_t count_escapes(std::string_view raw, std::string_view prefix, std::size_t hex_digits) {
    std::size_t n = 0;
    for (std::size_t p = raw.find(prefix); p != std::string_view::npos; p = raw.find(prefix, p + 1)) {
        std::size_t i = p + prefix.size();
        std::size_t k = 0;
        while (k < hex_digits && i + k < raw.size() && std::isxdigit(static_cast<unsigned char>(raw[i + k]))) ++k;
        if (k == hex_digits) ++n;
    }
    return n;
}

bool is_base64_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '/';
}

}  // namespace

const SchemaPtr& html_schema() {
    static const SchemaPtr schema = [] {
        std::vector<std::string> cols;
#define PHISHLENS_NAME(name) cols.emplace_back(#name);
        PHISHLENS_HTML_FEATURES(PHISHLENS_NAME)
#undef PHISHLENS_NAME
        return std::make_shared<const FeatureSchema>(FormatKind::html, std::move(cols), 1);
    }();
    return schema;
}

const SchemaPtr& html_selected_schema() {
    static const SchemaPtr schema = [] {
        const std::vector<std::string> names = {
            "url_punct_char_count", "tag_count",         "whitespace_ratio",        "entropy",
            "form_count",           "embedded_js_count", "html_whitespace_ratio",   "script_entropy",
            "min_link_length",      "external_link_count", "total_script_characters", "internal_link_count",
            "url_digit_count"};
        return project_schema(*html_schema(), names);
    }();
    return schema;
}

FeatureVector HtmlFeatures::to_vector() const {
    std::vector<double> v;
#define PHISHLENS_VALUE(name) v.push_back(name);
    PHISHLENS_HTML_FEATURES(PHISHLENS_VALUE)
#undef PHISHLENS_VALUE
    return FeatureVector(html_schema(), std::move(v));
}

HtmlAnalysis extract_html(ByteView data, const std::optional<std::string>& page_host, const AnalyzerConfig& config) {
    HtmlAnalysis out;
    auto& f = out.features;
    std::string_view s = as_chars(data);
    f.file_size = static_cast<double>(s.size());
    f.entropy = shannon_entropy(data);
    if (!s.empty()) f.line_count = static_cast<double>(std::count(s.begin(), s.end(), '\n') + (s.back() == '\n' ? 0 : 1));
    std::size_t raw_ws = std::count_if(s.begin(), s.end(), is_space);
    f.html_whitespace_ratio = s.empty() ? 0.0 : static_cast<double>(raw_ws) / static_cast<double>(s.size());

    std::string visible;
    std::vector<std::string> hyperlinks, other_urls;
    std::set<std::string> tag_names;
    std::vector<std::string> stack;
    std::optional<std::string> base_href;
    double script_entropy_sum = 0;

    std::size_t i = 0;
    while (i < s.size()) {
        auto lt = s.find('<', i);
        if (lt == std::string_view::npos) lt = s.size();
        visible += decode_entities(s.substr(i, lt - i));
        if (lt >= s.size()) break;
        i = lt;

        if (s.substr(i).starts_with("<!--")) {
            f.comment_count += 1;
            auto close = s.find("-->", i + 4);
            i = close == std::string_view::npos ? s.size() : close + 3;
            continue;
        }
        if (i + 1 < s.size() && (s[i + 1] == '!' || s[i + 1] == '?')) {
            auto close = s.find('>', i);
            i = close == std::string_view::npos ? s.size() : close + 1;
            continue;
        }
        bool tag_start = i + 1 < s.size() && (std::isalpha(static_cast<unsigned char>(s[i + 1])) ||
                                              (s[i + 1] == '/' && i + 2 < s.size() &&
                                               std::isalpha(static_cast<unsigned char>(s[i + 2]))));
        if (!tag_start) {
            visible += '<';
            ++i;
            continue;
        }
        auto gt = tag_end(s, i);
        if (gt == std::string_view::npos) {
            out.warnings.push_back("unterminated tag at byte " + std::to_string(i));
            gt = s.size();
        }
        Tag tag = parse_tag(s.substr(i + 1, gt - i - 1));
        i = std::min(gt + 1, s.size());

        if (tag.end) {
            auto it = std::find(stack.rbegin(), stack.rend(), tag.name);
            if (it != stack.rend()) stack.erase(std::next(it).base(), stack.end());
            continue;
        }

        f.tag_count += 1;
        tag_names.insert(tag.name);
        for (const auto& a : tag.attrs) {
            if (a.name.size() > 2 && a.name.starts_with("on") &&
                std::all_of(a.name.begin() + 2, a.name.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
                f.event_handler_count += 1;
            if (a.name == "href" || a.name == "action" || a.name == "formaction") {
                auto v = std::string(trim(a.value));
                if (!v.empty()) (tag.name == "base" && a.name == "href" ? other_urls : hyperlinks).push_back(v);
            } else if (a.name == "src") {
                auto v = std::string(trim(a.value));
                if (!v.empty()) other_urls.push_back(v);
            } else if (a.name == "style") {
                style_urls(a.value, other_urls);
            }
        }
        const std::string& n = tag.name;
        if (n == "form") f.form_count += 1;
        else if (n == "noscript") f.noscript_count += 1;
        else if (n == "object") f.object_tag_count += 1;
        else if (n == "img") f.img_tag_count += 1;
        else if (n == "base" && !base_href) {
            if (auto h = tag.attr("href")) base_href = *h;
        } else if (n == "meta") {
            if (auto eq = tag.attr("http-equiv"); eq && iequals(trim(*eq), "refresh")) f.meta_refresh_count += 1;
        } else if (n == "iframe") {
            f.iframe_count += 1;
            auto w = dimension(tag.attr("width"));
            auto h = dimension(tag.attr("height"));
            std::string style = tag.attr("style") ? compact_lower(*tag.attr("style")) : std::string{};
            if ((w && *w <= 2) || (h && *h <= 2) || style.find("display:none") != std::string::npos ||
                style.find("visibility:hidden") != std::string::npos || tag.attr("hidden"))
                f.hidden_iframe_count += 1;
        }

        if ((n == "script" || n == "style") && !tag.self_closing) {
            // raw text up to the matching close tag
            auto close = ifind(s, "</" + n, i);
            if (close == std::string_view::npos) close = s.size();
            auto body = s.substr(i, close - i);
            if (n == "script") {
                f.script_block_count += 1;
                if (tag.attr("src")) {
                    f.external_script_count += 1;
                } else {
                    f.embedded_js_count += 1;
                    f.total_script_characters += static_cast<double>(body.size());
                    script_entropy_sum += shannon_entropy(body);
                    f.eval_count += static_cast<double>(count_pattern(body, "eval(", false));
                    f.location_redirect_count += static_cast<double>(count_pattern(body, "window.location", false));
                }
            } else {
                style_urls(body, other_urls);
            }
            auto gt2 = close < s.size() ? s.find('>', close) : std::string_view::npos;
            i = gt2 == std::string_view::npos ? s.size() : gt2 + 1;
            continue;
        }
        if (n == "script") {
            f.script_block_count += 1;
            if (tag.attr("src")) f.external_script_count += 1;
            else f.embedded_js_count += 1;
        }

        if (tag.self_closing || is_void_element(n)) continue;
        if ((n == "p" || n == "li") && !stack.empty() && stack.back() == n) stack.pop_back();
        stack.push_back(n);
        f.max_nesting_depth = std::max(f.max_nesting_depth, static_cast<double>(stack.size()));
    }

    f.unique_tag_count = static_cast<double>(tag_names.size());
    if (f.embedded_js_count > 0) f.script_entropy = script_entropy_sum / f.embedded_js_count;
    std::size_t vis_ws = std::count_if(visible.begin(), visible.end(), is_space);
    f.whitespace_ratio = visible.empty() ? 0.0 : static_cast<double>(vis_ws) / static_cast<double>(visible.size());

    // Obfuscation markers over the raw bytes.
    for (std::size_t p = 0; p < s.size();) {
        if (!is_base64_char(s[p])) {
            ++p;
            continue;
        }
        std::size_t q = p;
        while (q < s.size() && is_base64_char(s[q])) ++q;
        if (q - p >= config.base64_min_run) f.base64_occurrence_count += 1;
        p = q;
    }
    f.hex_escape_count = static_cast<double>(count_escapes(s, "\\x", 2));
    f.js_escape_count = static_cast<double>(count_escapes(s, "\\u", 4) + count_escapes(s, "%u", 4));

    double keyword_chars = 0;
    for (const auto& k : config.html_keywords) {
        if (k.empty()) continue;
        auto hits = count_pattern(visible, k, true);
        f.suspicious_keyword_count += static_cast<double>(hits);
        keyword_chars += static_cast<double>(hits * k.size());
    }
    f.keyword_text_ratio = visible.empty() ? 0.0 : keyword_chars / static_cast<double>(visible.size());

    // Links: explicit host, then <base href>, then relative-internal / absolute-external.
    std::optional<std::string> host;
    if (page_host && !page_host->empty()) host = normalize_host(*page_host);
    else if (base_href && has_network_authority(*base_href)) host = normalize_host(host_of(*base_href));
    for (const auto& link : hyperlinks) {
        bool internal;
        if (!has_network_authority(link)) internal = true;
        else if (host) internal = normalize_host(host_of(link)) == *host;
        else internal = false;
        (internal ? f.internal_link_count : f.external_link_count) += 1;
    }

    std::vector<std::string> all = hyperlinks;
    all.insert(all.end(), other_urls.begin(), other_urls.end());
    f.url_count = static_cast<double>(all.size());
    if (!all.empty()) {
        double total_len = 0, subdomains = 0, hosted = 0;
        f.min_link_length = static_cast<double>(all.front().size());
        for (const auto& u : all) {
            double len = static_cast<double>(u.size());
            f.min_link_length = std::min(f.min_link_length, len);
            f.max_link_length = std::max(f.max_link_length, len);
            total_len += len;
            f.url_digit_count += static_cast<double>(std::count_if(u.begin(), u.end(), [](char c) { return c >= '0' && c <= '9'; }));
            f.url_punct_char_count += static_cast<double>(punct_char_count(u));
            if (has_network_authority(u)) {
                auto h = host_of(u);
                if (h.empty()) continue;
                hosted += 1;
                subdomains += static_cast<double>(subdomain_count(h));
                if (is_ipv4_host(h) || h.starts_with('[')) f.ip_url_count += 1;
                if (is_shortener_host(h, config.url_shorteners)) f.shortener_url_count += 1;
            }
        }
        f.avg_link_length = total_len / static_cast<double>(all.size());
        if (hosted > 0) f.avg_subdomain_count = subdomains / hosted;
    }
    return out;
}

AnalysisReport analyze_html(ByteView data, const std::optional<std::string>& page_host, const AnalyzerConfig& config,
                            std::string source_path) {
    auto result = extract_html(data, page_host, config);
    AnalysisReport report{std::move(source_path), FormatKind::html, result.features.to_vector(),
                          std::move(result.warnings), result.parse_failed};
    for (auto& col : report.features.sanitize()) report.warnings.push_back("non-finite value in " + col + " replaced by 0");
    return report;
}

FeatureVector project_top13_html(const HtmlFeatures& features) {
    return features.to_vector().project(html_selected_schema());
}

}  // namespace phishlens
