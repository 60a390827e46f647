#include "phishlens/xlsx.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>

#include "ooxml_util.hpp"
#include "phishlens/container/cfb.hpp"
#include "phishlens/container/vba.hpp"
#include "phishlens/container/zip.hpp"
#include "phishlens/docx.hpp"
#include "phishlens/error.hpp"
#include "phishlens/xml_scan.hpp"

namespace phishlens {
namespace {

constexpr std::string_view kImageExtensions[] = {"png", "jpg", "jpeg", "gif", "bmp", "emf", "wmf", "tif", "tiff", "svg"};
constexpr std::string_view kAutoExecNames[] = {"auto_open", "auto_close", "auto_activate", "auto_deactivate",
                                               "workbook_open", "workbook_activate", "workbook_beforeclose"};

struct SheetRef {
    std::string name;
    std::string state;
    std::string part;
    bool chart = false;
};

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

// "AB12" -> {12, 28}
std::pair<std::size_t, std::size_t> parse_cell_ref(std::string_view ref) {
    std::size_t col = 0, row = 0, i = 0;
    while (i < ref.size() && std::isalpha(static_cast<unsigned char>(ref[i]))) {
        col = std::min<std::size_t>(col * 26 + static_cast<std::size_t>(ascii_lower(ref[i]) - 'a' + 1), 1u << 20);
        ++i;
    }
    while (i < ref.size() && std::isdigit(static_cast<unsigned char>(ref[i]))) {
        row = std::min<std::size_t>(row * 10 + static_cast<std::size_t>(ref[i] - '0'), 1u << 24);
        ++i;
    }
    return {row, col};
}

bool is_numeric_text(std::string_view s) {
    s = trim(s);
    if (s.empty()) return false;
    char* end = nullptr;
    std::string tmp(s);
    std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size();
}

bool contains_url(std::string_view s) {
    return ifind(s, "http://") != std::string_view::npos || ifind(s, "https://") != std::string_view::npos ||
           ifind(s, "www.") != std::string_view::npos;
}

bool is_auto_exec_name(std::string_view name) {
    std::string lower = to_lower(name);
    if (lower.starts_with("_xlnm.")) lower.erase(0, 6);
    for (auto n : kAutoExecNames)
        if (lower.starts_with(n)) return true;
    return false;
}

std::vector<std::string> shared_strings(const container::ZipArchive& zip, const std::string& part,
                                        std::vector<std::string>& warnings) {
    std::vector<std::string> out;
    auto text = zip.read_text(part);
    if (!text) {
        if (zip.contains(part)) warnings.push_back("shared strings part unreadable");
        return out;
    }
    XmlScanner scanner(*text);
    std::string current;
    bool in_si = false, in_t = false;
    int rph_depth = 0;
    while (auto tok = scanner.next()) {
        using Kind = XmlToken::Kind;
        auto local = xml_local_name(tok->name);
        if (tok->kind == Kind::start_tag) {
            if (local == "si") {
                in_si = true;
                current.clear();
                if (tok->self_closing) {
                    out.push_back({});
                    in_si = false;
                }
            } else if (local == "rPh" && !tok->self_closing) {
                ++rph_depth;
            } else if (local == "t" && !tok->self_closing) {
                in_t = true;
            }
        } else if (tok->kind == Kind::end_tag) {
            if (local == "si" && in_si) {
                out.push_back(current);
                in_si = false;
            } else if (local == "rPh" && rph_depth > 0) {
                --rph_depth;
            } else if (local == "t") {
                in_t = false;
            }
        } else if ((tok->kind == Kind::text || tok->kind == Kind::cdata) && in_si && in_t && rph_depth == 0) {
            current += tok->kind == Kind::text ? xml_unescape(tok->text) : std::string(tok->text);
        }
    }
    return out;
}

}  // namespace

const SchemaPtr& xlsx_schema() {
    static const SchemaPtr schema = [] {
        std::vector<std::string> cols;
#define PHISHLENS_NAME(name) cols.emplace_back(#name);
        PHISHLENS_XLSX_FEATURES(PHISHLENS_NAME)
#undef PHISHLENS_NAME
        return std::make_shared<const FeatureSchema>(FormatKind::xlsx, std::move(cols), 1);
    }();
    return schema;
}

const SchemaPtr& xlsx_selected_schema() {
    static const SchemaPtr schema = [] {
        const std::vector<std::string> names = {
            "entropy_of_text",   "macro_chr_count",        "macro_vocab_size",   "macro_arithmetic_operator_count",
            "macro_token_count", "macro_max_line_length",  "remote_template_present", "numeric_cell_count",
            "string_cell_count", "avg_cell_length"};
        return project_schema(*xlsx_schema(), names);
    }();
    return schema;
}

FeatureVector XlsxFeatures::to_vector() const {
    std::vector<double> v;
#define PHISHLENS_VALUE(name) v.push_back(name);
    PHISHLENS_XLSX_FEATURES(PHISHLENS_VALUE)
#undef PHISHLENS_VALUE
    return FeatureVector(xlsx_schema(), std::move(v));
}

XlsxAnalysis extract_xlsx(ByteView data, const AnalyzerConfig& config) {
    XlsxAnalysis out;
    auto& f = out.features;
    f.file_size = static_cast<double>(data.size());
    f.entropy_of_file = shannon_entropy(data);

    container::ZipArchive zip;
    try {
        zip = container::ZipArchive::open(data);
    } catch (const Error& e) {
        out.parse_failed = true;
        out.warnings.push_back(std::string("not a readable OOXML package: ") + e.what());
        return out;
    }

    // Workbook part from the package relationships, falling back to the usual path.
    std::string workbook = "xl/workbook.xml";
    for (const auto& [id, rel] : detail::read_relationships(zip, "")) {
        if (!rel.external && rel.type.ends_with("/officeDocument")) workbook = rel.target;
    }
    auto workbook_rels = detail::read_relationships(zip, workbook);

    std::vector<SheetRef> sheets;
    std::vector<std::pair<std::string, std::string>> defined_names;
    if (auto text = zip.read_text(workbook)) {
        XmlScanner scanner(*text);
        std::string pending_name;
        std::string name_text;
        bool in_defined = false;
        while (auto tok = scanner.next()) {
            using Kind = XmlToken::Kind;
            auto local = xml_local_name(tok->name);
            if (tok->kind == Kind::start_tag && local == "sheet") {
                SheetRef s;
                s.name = xml_unescape(tok->attribute("name").value_or(""));
                s.state = xml_unescape(tok->attribute("state").value_or(""));
                if (auto rid = tok->attribute_local("id")) {
                    auto it = workbook_rels.find(xml_unescape(*rid));
                    if (it != workbook_rels.end()) {
                        s.part = it->second.target;
                        s.chart = it->second.type.ends_with("/chartsheet");
                    }
                }
                sheets.push_back(std::move(s));
            } else if (tok->kind == Kind::start_tag && local == "definedName") {
                pending_name = xml_unescape(tok->attribute("name").value_or(""));
                name_text.clear();
                in_defined = !tok->self_closing;
                if (tok->self_closing) defined_names.emplace_back(pending_name, "");
            } else if (tok->kind == Kind::text && in_defined) {
                name_text += xml_unescape(tok->text);
            } else if (tok->kind == Kind::end_tag && local == "definedName" && in_defined) {
                defined_names.emplace_back(pending_name, name_text);
                in_defined = false;
            }
        }
    } else {
        out.warnings.push_back("workbook part '" + workbook + "' missing or unreadable");
        for (const auto& e : zip.entries())
            if (istarts_with(e.name, "xl/worksheets/") && iends_with(e.name, ".xml") &&
                e.name.find('/', 14) == std::string::npos)
                sheets.push_back({e.name, "", e.name, false});
    }

    std::string sst_part = "xl/sharedStrings.xml";
    for (const auto& [id, rel] : workbook_rels)
        if (!rel.external && rel.type.ends_with("/sharedStrings")) sst_part = rel.target;
    auto sst = shared_strings(zip, sst_part, out.warnings);

    f.sheet_count = static_cast<double>(sheets.size());
    std::string all_text;
    std::size_t total_cells = 0, empty_cells = 0, text_chars = 0;
    for (const auto& sheet : sheets) {
        if (sheet.state == "hidden") f.hidden_sheet_count += 1;
        if (sheet.state == "veryHidden") f.very_hidden_sheet_count += 1;
        if (sheet.chart || istarts_with(sheet.part, "xl/chartsheets/")) {
            f.chart_sheet_count += 1;
            continue;
        }
        if (sheet.part.empty()) continue;
        auto text = zip.read_text(sheet.part);
        if (!text) {
            out.warnings.push_back("worksheet '" + sheet.part + "' missing or unreadable");
            continue;
        }
        std::size_t max_row = 0, max_col = 0, row_seq = 0, col_seq = 0;
        bool protected_sheet = false;

        // state for the current <c>
        bool in_cell = false, has_value = false, in_v = false, in_is = false, in_t = false;
        std::string type, value;
        auto finish_cell = [&] {
            ++total_cells;
            if (!has_value) {
                ++empty_cells;
                return;
            }
            std::string s;
            bool is_string = false;
            if (type == "s") {
                is_string = true;
                char* end = nullptr;
                long idx = std::strtol(value.c_str(), &end, 10);
                if (end != value.c_str() && idx >= 0 && static_cast<std::size_t>(idx) < sst.size())
                    s = sst[static_cast<std::size_t>(idx)];
            } else if (type == "str" || type == "inlineStr") {
                is_string = true;
                s = value;
            } else if ((type.empty() || type == "n") && is_numeric_text(value)) {
                f.numeric_cell_count += 1;
            }
            if (is_string) {
                f.string_cell_count += 1;
                std::size_t len = utf8_length(s);
                text_chars += len;
                f.max_cell_length = std::max(f.max_cell_length, static_cast<double>(len));
                all_text += s;
                if (contains_url(s)) f.url_in_cell_count += 1;
            }
        };

        XmlScanner scanner(*text);
        while (auto tok = scanner.next()) {
            using Kind = XmlToken::Kind;
            auto local = xml_local_name(tok->name);
            if (tok->kind == Kind::start_tag) {
                if (local == "row") {
                    ++row_seq;
                    col_seq = 0;
                    if (auto r = tok->attribute("r")) row_seq = parse_cell_ref(*r).first;
                    max_row = std::max(max_row, row_seq);
                } else if (local == "c") {
                    ++col_seq;
                    if (auto r = tok->attribute("r")) {
                        auto [row, col] = parse_cell_ref(*r);
                        if (col) col_seq = col;
                        if (row) max_row = std::max(max_row, row);
                    }
                    max_col = std::max(max_col, col_seq);
                    type = std::string(tok->attribute("t").value_or(""));
                    value.clear();
                    has_value = false;
                    in_cell = !tok->self_closing;
                    if (tok->self_closing) finish_cell();
                } else if (in_cell && local == "v") {
                    in_v = !tok->self_closing;
                    has_value = true;
                } else if (in_cell && local == "is") {
                    in_is = !tok->self_closing;
                    has_value = true;
                } else if (in_is && local == "t") {
                    in_t = !tok->self_closing;
                } else if (in_cell && local == "f") {
                    f.formula_count += 1;
                } else if (local == "hyperlink") {
                    f.hyperlink_count += 1;
                } else if (local == "sheetProtection") {
                    protected_sheet = true;
                }
            } else if (tok->kind == Kind::end_tag) {
                if (local == "c" && in_cell) {
                    in_cell = false;
                    finish_cell();
                } else if (local == "v") {
                    in_v = false;
                } else if (local == "is") {
                    in_is = false;
                } else if (local == "t") {
                    in_t = false;
                }
            } else if (tok->kind == Kind::text && in_cell && (in_v || (in_is && in_t))) {
                value += xml_unescape(tok->text);
            }
        }
        if (protected_sheet) f.protected_sheet_count += 1;
        f.max_rows = std::max(f.max_rows, static_cast<double>(max_row));
        f.max_cols = std::max(f.max_cols, static_cast<double>(max_col));
    }
    f.empty_cell_ratio = total_cells ? static_cast<double>(empty_cells) / static_cast<double>(total_cells) : 0.0;
    f.avg_cell_length = f.string_cell_count > 0 ? static_cast<double>(text_chars) / f.string_cell_count : 0.0;
    f.entropy_of_text = shannon_entropy(std::string_view(all_text));

    // Relationship-level indicators across every part in the package.
    std::set<std::string> image_types;
    for (const auto& entry : zip.entries()) {
        const std::string& name = entry.name;
        if (iends_with(name, ".rels")) {
            // rels of "<dir>/_rels/<part>.rels" belong to "<dir>/<part>"
            std::string owner = name;
            auto pos = owner.rfind("_rels/");
            if (pos != std::string::npos) owner.erase(pos, 6);
            owner.erase(owner.size() - 5);
            for (const auto& [id, rel] : detail::read_relationships(zip, owner)) {
                bool hyperlink = rel.type.ends_with("/hyperlink");
                if (rel.type.ends_with("/attachedTemplate")) f.remote_template_present = 1;
                if (rel.external && !hyperlink) {
                    f.external_reference_count += 1;
                    if (istarts_with(rel.target, "http://") || istarts_with(rel.target, "https://"))
                        f.remote_template_present = 1;
                }
            }
        }
        if (istarts_with(name, "xl/media/")) {
            f.media_entry_count += 1;
            std::string ext = to_lower(detail::extension_of(name));
            if (std::find(std::begin(kImageExtensions), std::end(kImageExtensions), ext) != std::end(kImageExtensions)) {
                f.embedded_image_count += 1;
                f.largest_image_bytes = std::max(f.largest_image_bytes, static_cast<double>(entry.uncompressed_size));
                image_types.insert(ext == "jpg" ? "jpeg" : ext);
            }
        }
        if (istarts_with(name, "xl/drawings/") && iends_with(name, ".xml") && name.find("/_rels/") == std::string::npos)
            f.drawing_part_count += 1;
    }
    f.image_type_count = static_cast<double>(image_types.size());

    f.defined_name_count = static_cast<double>(defined_names.size());
    for (const auto& [name, formula] : defined_names) {
        bool suspicious = is_auto_exec_name(name);
        if (is_auto_exec_name(name)) f.auto_exec_name_present = 1;
        for (auto token : {"exec(", "call(", "register(", "http", "cmd", "powershell"})
            if (ifind(formula, token) != std::string_view::npos) suspicious = true;
        if (suspicious) f.suspicious_defined_name_count += 1;
    }

    // Macros.
    std::string macro_source;
    for (const auto& entry : zip.entries()) {
        if (!iends_with(entry.name, "vbaProject.bin")) continue;
        f.macro_present = 1;
        try {
            auto cfb = container::CfbFile::open(zip.read(entry));
            auto vba = container::vba_extract(cfb);
            f.macro_module_count += static_cast<double>(vba.modules.size());
            for (const auto& m : vba.modules) {
                if (!macro_source.empty() && macro_source.back() != '\n') macro_source += '\n';
                macro_source += m.source;
            }
            for (auto& w : vba.warnings) out.warnings.push_back(std::move(w));
        } catch (const Error& e) {
            out.warnings.push_back("vbaProject '" + entry.name + "' unreadable: " + e.what());
        }
    }
    if (!macro_source.empty()) {
        auto m = compute_macro_metrics(macro_source, config.vba_keywords);
#define PHISHLENS_COPY(name) f.macro_##name = m.name;
        PHISHLENS_MACRO_METRICS(PHISHLENS_COPY)
#undef PHISHLENS_COPY
        f.api_keyword_count = static_cast<double>(count_vba_keywords(macro_source, config.vba_api_keywords));
        for (auto n : kAutoExecNames) {
            for (auto kw : {"sub ", "function "}) {
                if (ifind(macro_source, std::string(kw) + std::string(n)) != std::string_view::npos)
                    f.auto_exec_name_present = 1;
            }
        }
    }
    return out;
}

AnalysisReport analyze_xlsx(ByteView data, const AnalyzerConfig& config, std::string source_path) {
    auto result = extract_xlsx(data, config);
    AnalysisReport report{std::move(source_path), FormatKind::xlsx, result.features.to_vector(),
                          std::move(result.warnings), result.parse_failed};
    for (auto& col : report.features.sanitize()) report.warnings.push_back("non-finite value in " + col + " replaced by 0");
    return report;
}

FeatureVector project_top10_xlsx(const XlsxFeatures& features) {
    return features.to_vector().project(xlsx_selected_schema());
}

}  // namespace phishlens
