#include "ooxml_util.hpp"

#include <vector>

#include "phishlens/bytes.hpp"
#include "phishlens/xml_scan.hpp"

namespace phishlens::detail {

std::string rels_path_for(std::string_view part) {
    auto slash = part.rfind('/');
    if (slash == std::string_view::npos) return "_rels/" + std::string(part) + ".rels";
    return std::string(part.substr(0, slash + 1)) + "_rels/" + std::string(part.substr(slash + 1)) + ".rels";
}

std::string resolve_part_target(std::string_view part, std::string_view target) {
    std::string base;
    if (!target.empty() && target.front() == '/') {
        target.remove_prefix(1);
    } else {
        auto slash = part.rfind('/');
        if (slash != std::string_view::npos) base = std::string(part.substr(0, slash + 1));
    }
    std::string joined = base + std::string(target);
    std::vector<std::string> segs;
    std::size_t start = 0;
    while (start <= joined.size()) {
        auto slash = joined.find('/', start);
        std::string seg = joined.substr(start, slash == std::string::npos ? std::string::npos : slash - start);
        if (seg == "..") {
            if (!segs.empty()) segs.pop_back();
        } else if (!seg.empty() && seg != ".") {
            segs.push_back(seg);
        }
        if (slash == std::string::npos) break;
        start = slash + 1;
    }
    std::string out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (i) out += '/';
        out += segs[i];
    }
    return out;
}

std::map<std::string, Relationship> read_relationships(const container::ZipArchive& zip, std::string_view part) {
    std::map<std::string, Relationship> rels;
    auto text = zip.read_text(rels_path_for(part));
    if (!text) return rels;
    XmlScanner scanner(*text);
    while (auto tok = scanner.next()) {
        if (tok->kind != XmlToken::Kind::start_tag || xml_local_name(tok->name) != "Relationship") continue;
        Relationship r;
        r.id = xml_unescape(tok->attribute("Id").value_or(""));
        r.type = xml_unescape(tok->attribute("Type").value_or(""));
        std::string target = xml_unescape(tok->attribute("Target").value_or(""));
        r.external = iequals(tok->attribute("TargetMode").value_or(""), "External");
        r.target = r.external ? target : resolve_part_target(part, target);
        rels[r.id] = std::move(r);
    }
    return rels;
}

std::string_view extension_of(std::string_view path) {
    auto slash = path.rfind('/');
    auto dot = path.rfind('.');
    if (dot == std::string_view::npos || (slash != std::string_view::npos && dot < slash)) return {};
    return path.substr(dot + 1);
}

}  // namespace phishlens::detail
