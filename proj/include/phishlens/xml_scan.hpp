#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace phishlens {

struct XmlAttribute {
    std::string_view name;
    std::string_view value;  // raw, entities not decoded
};

struct XmlToken {
    enum class Kind { start_tag, end_tag, text, declaration, comment, cdata };
    Kind kind;
    std::string_view name;  // qualified name for tags and declarations
    std::vector<XmlAttribute> attributes;
    bool self_closing = false;
    std::string_view text;  // text, comment and cdata payloads

    std::optional<std::string_view> attribute(std::string_view qname) const noexcept;
    /// First attribute whose local name (after any prefix) matches.
    std::optional<std::string_view> attribute_local(std::string_view local) const noexcept;
};

/// Forgiving pull tokenizer for OOXML parts. Malformed markup ends the token
/// stream early instead of throwing.
class XmlScanner {
public:
    explicit XmlScanner(std::string_view xml) noexcept : xml_(xml) {}
    std::optional<XmlToken> next();

private:
    void parse_attributes(std::string_view body, XmlToken& token) const;

    std::string_view xml_;
    std::size_t pos_ = 0;
};

std::string_view xml_local_name(std::string_view qname) noexcept;
std::string xml_unescape(std::string_view raw);

}  // namespace phishlens
