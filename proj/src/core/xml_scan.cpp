#include "phishlens/xml_scan.hpp"

#include <cstdint>

namespace phishlens {
namespace {

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_name_char(char c) noexcept {
    return !is_space(c) && c != '=' && c != '>' && c != '/' && c != '<' && c != '"' && c != '\'' && c != '?';
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x110000) {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

}  // namespace

std::optional<std::string_view> XmlToken::attribute(std::string_view qname) const noexcept {
    for (const auto& a : attributes)
        if (a.name == qname) return a.value;
    return std::nullopt;
}

std::optional<std::string_view> XmlToken::attribute_local(std::string_view local) const noexcept {
    for (const auto& a : attributes)
        if (xml_local_name(a.name) == local) return a.value;
    return std::nullopt;
}

std::string_view xml_local_name(std::string_view qname) noexcept {
    auto colon = qname.rfind(':');
    return colon == std::string_view::npos ? qname : qname.substr(colon + 1);
}

std::string xml_unescape(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out += raw[i];
            continue;
        }
        auto semi = raw.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out += '&';
            continue;
        }
        auto ent = raw.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (ent.size() >= 2 && ent[0] == '#') {
            std::uint32_t cp = 0;
            bool hex = ent[1] == 'x' || ent[1] == 'X';
            bool ok = ent.size() > (hex ? 2u : 1u);
            for (std::size_t k = hex ? 2 : 1; k < ent.size() && ok; ++k) {
                char c = ent[k];
                int d = -1;
                if (c >= '0' && c <= '9') d = c - '0';
                else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
                else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
                if (d < 0) ok = false;
                else cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
                if (cp > 0x10FFFF) ok = false;
            }
            if (!ok) {
                out += '&';
                continue;
            }
            append_utf8(out, cp);
        } else {
            out += '&';
            continue;
        }
        i = semi;
    }
    return out;
}

void XmlScanner::parse_attributes(std::string_view body, XmlToken& token) const {
    std::size_t i = 0;
    while (i < body.size()) {
        while (i < body.size() && is_space(body[i])) ++i;
        std::size_t name_start = i;
        while (i < body.size() && is_name_char(body[i])) ++i;
        if (i == name_start) {
            ++i;
            continue;
        }
        std::string_view name = body.substr(name_start, i - name_start);
        while (i < body.size() && is_space(body[i])) ++i;
        if (i >= body.size() || body[i] != '=') {
            token.attributes.push_back({name, {}});
            continue;
        }
        ++i;
        while (i < body.size() && is_space(body[i])) ++i;
        if (i >= body.size()) {
            token.attributes.push_back({name, {}});
            break;
        }
        std::string_view value;
        if (body[i] == '"' || body[i] == '\'') {
            char q = body[i++];
            auto end = body.find(q, i);
            if (end == std::string_view::npos) end = body.size();
            value = body.substr(i, end - i);
            i = end + 1;
        } else {
            std::size_t vs = i;
            while (i < body.size() && !is_space(body[i])) ++i;
            value = body.substr(vs, i - vs);
        }
        token.attributes.push_back({name, value});
    }
}

std::optional<XmlToken> XmlScanner::next() {
    if (pos_ >= xml_.size()) return std::nullopt;
    if (xml_[pos_] != '<') {
        auto lt = xml_.find('<', pos_);
        if (lt == std::string_view::npos) lt = xml_.size();
        XmlToken t{XmlToken::Kind::text, {}, {}, false, xml_.substr(pos_, lt - pos_)};
        pos_ = lt;
        return t;
    }
    std::string_view rest = xml_.substr(pos_);
    if (rest.starts_with("<!--")) {
        auto end = xml_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) {
            pos_ = xml_.size();
            return std::nullopt;
        }
        XmlToken t{XmlToken::Kind::comment, {}, {}, false, xml_.substr(pos_ + 4, end - pos_ - 4)};
        pos_ = end + 3;
        return t;
    }
    if (rest.starts_with("<![CDATA[")) {
        auto end = xml_.find("]]>", pos_ + 9);
        if (end == std::string_view::npos) {
            pos_ = xml_.size();
            return std::nullopt;
        }
        XmlToken t{XmlToken::Kind::cdata, {}, {}, false, xml_.substr(pos_ + 9, end - pos_ - 9)};
        pos_ = end + 3;
        return t;
    }
    auto gt = xml_.find('>', pos_);
    if (gt == std::string_view::npos) {
        pos_ = xml_.size();
        return std::nullopt;
    }
    std::string_view inner = xml_.substr(pos_ + 1, gt - pos_ - 1);
    // quoted attribute values may legally contain '>'
    {
        char quote = 0;
        std::size_t k = pos_ + 1;
        for (; k < xml_.size(); ++k) {
            char c = xml_[k];
            if (quote) {
                if (c == quote) quote = 0;
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '>') {
                break;
            }
        }
        if (k >= xml_.size()) {
            pos_ = xml_.size();
            return std::nullopt;
        }
        gt = k;
        inner = xml_.substr(pos_ + 1, gt - pos_ - 1);
    }
    pos_ = gt + 1;

    XmlToken t{XmlToken::Kind::start_tag, {}, {}, false, {}};
    if (!inner.empty() && (inner.front() == '?' || inner.front() == '!')) {
        t.kind = XmlToken::Kind::declaration;
        inner.remove_prefix(1);
        if (!inner.empty() && inner.back() == '?') inner.remove_suffix(1);
    } else if (!inner.empty() && inner.front() == '/') {
        t.kind = XmlToken::Kind::end_tag;
        inner.remove_prefix(1);
    } else if (!inner.empty() && inner.back() == '/') {
        t.self_closing = true;
        inner.remove_suffix(1);
    }
    std::size_t n = 0;
    while (n < inner.size() && is_name_char(inner[n])) ++n;
    t.name = inner.substr(0, n);
    if (t.kind != XmlToken::Kind::end_tag) parse_attributes(inner.substr(n), t);
    return t;
}

}  // namespace phishlens
