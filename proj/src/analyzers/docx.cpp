#include "phishlens/docx.hpp"

#include <map>
#include <set>

#include "ooxml_util.hpp"
#include "phishlens/container/cfb.hpp"
#include "phishlens/container/vba.hpp"
#include "phishlens/container/zip.hpp"
#include "phishlens/error.hpp"
#include "phishlens/xml_scan.hpp"

namespace phishlens {
namespace {

constexpr std::size_t kAttributeCounters = 20;

std::string counter_column(std::string_view name) {
    std::string col = "struct_";
    for (char c : name) col += (c == ':') ? '_' : c;
    return col;
}

bool is_word_char(char c) noexcept {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

// DDE / DDEAUTO as a standalone field keyword.
bool has_dde_token(std::string_view text) {
    for (std::size_t pos = ifind(text, "dde"); pos != std::string_view::npos; pos = ifind(text, "dde", pos + 1)) {
        if (pos > 0 && is_word_char(text[pos - 1])) continue;
        std::size_t end = pos + 3;
        if (istarts_with(text.substr(end), "auto")) end += 4;
        if (end < text.size() && is_word_char(text[end])) continue;
        return true;
    }
    return false;
}

bool attribute_matches(std::string_view counter, std::string_view qname) {
    if (counter == "xmlns") return qname == "xmlns" || qname.starts_with("xmlns:");
    if (counter.find(':') != std::string_view::npos) return qname == counter;
    if (qname.starts_with("xmlns:")) return false;
    return xml_local_name(qname) == counter;
}

bool is_xml_part(std::string_view name) { return iends_with(name, ".xml") || iends_with(name, ".rels"); }

}  // namespace

double DocxFeatures::struct_counter(std::string_view name) const {
    for (std::size_t i = 0; i < kDocxStructCounters.size(); ++i)
        if (kDocxStructCounters[i] == name) return struct_counters[i];
    throw Error(Errc::invalid_argument, "unknown structural counter '" + std::string(name) + "'");
}

const SchemaPtr& docx_schema() {
    static const SchemaPtr schema = [] {
        std::vector<std::string> cols = {"file_size",        "entropy",     "macro_present",        "vba_keywords_count",
                                         "dde_present",      "ole_object_count", "ole_object_type_count"};
        for (auto name : kDocxStructCounters) cols.push_back(counter_column(name));
        return std::make_shared<const FeatureSchema>(FormatKind::docx, std::move(cols), 1);
    }();
    return schema;
}

const SchemaPtr& docx_selected_schema() {
    static const SchemaPtr schema = [] {
        const std::vector<std::string> names = {"ole_object_count", "ole_object_type_count", "macro_present",
                                                "dde_present",      "vba_keywords_count",    "entropy",
                                                "struct_ContentType", "struct_PartName",     "file_size",
                                                "struct_pos"};
        return project_schema(*docx_schema(), names);
    }();
    return schema;
}

FeatureVector DocxFeatures::to_vector() const {
    std::vector<double> v = {file_size,   entropy,          macro_present,        vba_keywords_count,
                             dde_present, ole_object_count, ole_object_type_count};
    v.insert(v.end(), struct_counters.begin(), struct_counters.end());
    return FeatureVector(docx_schema(), std::move(v));
}

std::size_t count_vba_keywords(std::string_view source, const std::vector<std::string>& keywords) {
    std::size_t total = 0;
    for (const auto& k : keywords)
        if (!k.empty()) total += count_pattern(source, k, true);
    return total;
}

DocxAnalysis extract_docx(ByteView data, const AnalyzerConfig& config) {
    DocxAnalysis out;
    auto& f = out.features;
    f.file_size = static_cast<double>(data.size());
    f.entropy = shannon_entropy(data);

    container::ZipArchive zip;
    try {
        zip = container::ZipArchive::open(data);
    } catch (const Error& e) {
        out.parse_failed = true;
        out.warnings.push_back(std::string("not a readable OOXML package: ") + e.what());
        return out;
    }

    // OLE objects keyed by package path (or relationship id when unresolved).
    std::map<std::string, std::string> ole_types;
    bool dde = false;
    std::size_t keyword_hits = 0;

    for (const auto& entry : zip.entries()) {
        if (!entry.name.empty() && entry.name.back() == '/') continue;
        if (iends_with(entry.name, "vbaProject.bin")) {
            f.macro_present = 1;
            try {
                auto cfb = container::CfbFile::open(zip.read(entry));
                auto vba = container::vba_extract(cfb);
                for (const auto& m : vba.modules) keyword_hits += count_vba_keywords(m.source, config.vba_keywords);
                for (auto& w : vba.warnings) out.warnings.push_back(std::move(w));
            } catch (const Error& e) {
                out.warnings.push_back("vbaProject '" + entry.name + "' unreadable: " + e.what());
            }
        }
        if (istarts_with(entry.name, "word/embeddings/")) {
            ole_types.emplace(entry.name, to_lower(detail::extension_of(entry.name)));
        }
    }

    for (const auto& entry : zip.entries()) {
        if (!is_xml_part(entry.name)) continue;
        Bytes raw;
        try {
            raw = zip.read(entry);
        } catch (const Error& e) {
            out.warnings.push_back("part '" + entry.name + "' unreadable: " + e.what());
            continue;
        }
        std::string_view xml = as_chars(raw);
        if (ifind(xml, "ddeauto") != std::string_view::npos) dde = true;

        std::map<std::string, detail::Relationship> rels;
        bool rels_loaded = false;
        std::string instr_text;
        int instr_depth = 0;
        std::size_t anonymous_ole = 0;

        XmlScanner scanner(xml);
        while (auto tok = scanner.next()) {
            using Kind = XmlToken::Kind;
            if (tok->kind == Kind::start_tag || tok->kind == Kind::declaration) {
                for (const auto& attr : tok->attributes) {
                    for (std::size_t i = 0; i < kAttributeCounters; ++i)
                        if (attribute_matches(kDocxStructCounters[i], attr.name)) f.struct_counters[i] += 1;
                }
            }
            if (tok->kind == Kind::start_tag) {
                for (std::size_t i = kAttributeCounters; i < kDocxStructCounters.size(); ++i)
                    if (tok->name == kDocxStructCounters[i]) f.struct_counters[i] += 1;
                // Default/Override are content-type elements, not attributes
                if (tok->name == "Default") f.struct_counters[3] += 1;
                if (tok->name == "Override") f.struct_counters[4] += 1;

                if (tok->name == "w:instrText" && !tok->self_closing) ++instr_depth;
                if (tok->name == "w:fldSimple") {
                    if (auto instr = tok->attribute("w:instr")) instr_text += " " + xml_unescape(*instr) + " ";
                }
                if (iequals(xml_local_name(tok->name), "OLEObject")) {
                    if (!rels_loaded) {
                        rels = detail::read_relationships(zip, entry.name);
                        rels_loaded = true;
                    }
                    std::string prog = xml_unescape(tok->attribute_local("ProgID").value_or(tok->attribute_local("progId").value_or("")));
                    std::string key;
                    std::string type = to_lower(prog);
                    if (auto rid = tok->attribute("r:id")) {
                        auto it = rels.find(xml_unescape(*rid));
                        if (it != rels.end() && !it->second.external) {
                            key = it->second.target;
                            if (type.empty()) type = to_lower(detail::extension_of(key));
                        } else {
                            key = entry.name + "#" + xml_unescape(*rid);
                        }
                    } else {
                        key = entry.name + "#anon" + std::to_string(anonymous_ole++);
                    }
                    auto [it, inserted] = ole_types.emplace(key, type);
                    if (!inserted && !prog.empty()) it->second = type;
                }
            } else if (tok->kind == Kind::end_tag) {
                if (tok->name == "w:instrText" && instr_depth > 0) {
                    --instr_depth;
                }
            } else if (tok->kind == Kind::text || tok->kind == Kind::cdata) {
                if (instr_depth > 0) instr_text += tok->kind == Kind::text ? xml_unescape(tok->text) : std::string(tok->text);
            }
        }
        if (has_dde_token(instr_text)) dde = true;
    }

    f.vba_keywords_count = static_cast<double>(keyword_hits);
    f.dde_present = dde ? 1 : 0;
    f.ole_object_count = static_cast<double>(ole_types.size());
    std::set<std::string> types;
    for (const auto& [key, type] : ole_types) types.insert(type);
    f.ole_object_type_count = static_cast<double>(types.size());
    return out;
}

AnalysisReport analyze_docx(ByteView data, const AnalyzerConfig& config, std::string source_path) {
    auto result = extract_docx(data, config);
    AnalysisReport report{std::move(source_path), FormatKind::docx, result.features.to_vector(), std::move(result.warnings),
                          result.parse_failed};
    for (auto& col : report.features.sanitize()) report.warnings.push_back("non-finite value in " + col + " replaced by 0");
    return report;
}

FeatureVector project_top10_docx(const DocxFeatures& features) {
    return features.to_vector().project(docx_selected_schema());
}

}  // namespace phishlens
