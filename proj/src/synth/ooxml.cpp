#include "phishlens/synth/ooxml.hpp"

#include <cstdio>
#include <set>

#include "phishlens/synth/zip_writer.hpp"

namespace phishlens::synth {
namespace {

constexpr const char* kXmlDecl = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
constexpr const char* kRelNs = "http://schemas.openxmlformats.org/package/2006/relationships";
constexpr const char* kOfficeRel = "http://schemas.openxmlformats.org/officeDocument/2006/relationships";

std::string esc(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

std::string column_name(std::size_t col) {
    std::string s;
    ++col;
    while (col > 0) {
        s.insert(s.begin(), static_cast<char>('A' + (col - 1) % 26));
        col = (col - 1) / 26;
    }
    return s;
}

struct Rels {
    std::string xml;
    int next = 1;
    std::string add(std::string_view type, std::string_view target, bool external = false) {
        std::string id = "rId" + std::to_string(next++);
        xml += "<Relationship Id=\"" + id + "\" Type=\"" + std::string(type) + "\" Target=\"" + esc(target) + "\"";
        if (external) xml += " TargetMode=\"External\"";
        xml += "/>";
        return id;
    }
    std::string str() const { return std::string(kXmlDecl) + "<Relationships xmlns=\"" + kRelNs + "\">" + xml + "</Relationships>"; }
};

std::string core_props(std::string_view title) {
    return std::string(kXmlDecl) +
           "<cp:coreProperties xmlns:cp=\"http://schemas.openxmlformats.org/package/2006/metadata/core-properties\" "
           "xmlns:dc=\"http://purl.org/dc/elements/1.1/\"><dc:title>" +
           esc(title) + "</dc:title><dc:creator>office</dc:creator></cp:coreProperties>";
}

}  // namespace

Bytes build_docx(const DocxSpec& spec) {
    const bool macro = spec.vba_project.has_value();
    std::string types = std::string(kXmlDecl) +
                        "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
                        "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
                        "<Default Extension=\"xml\" ContentType=\"application/xml\"/>";
    std::set<std::string> ole_exts;
    for (const auto& o : spec.ole_objects) ole_exts.insert(o.extension);
    for (const auto& ext : ole_exts)
        types += "<Default Extension=\"" + esc(ext) + "\" ContentType=\"application/vnd.openxmlformats-officedocument.oleObject\"/>";
    if (macro) types += "<Default Extension=\"bin\" ContentType=\"application/vnd.ms-office.vbaProject\"/>";
    types += std::string("<Override PartName=\"/word/document.xml\" ContentType=\"") +
             (macro ? "application/vnd.ms-word.document.macroEnabled.main+xml"
                    : "application/vnd.openxmlformats-officedocument.wordprocessingml.document.main+xml") +
             "\"/>"
             "<Override PartName=\"/word/styles.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.wordprocessingml.styles+xml\"/>"
             "<Override PartName=\"/docProps/core.xml\" ContentType=\"application/vnd.openxmlformats-package.core-properties+xml\"/>"
             "</Types>";

    Rels root;
    root.add(std::string(kOfficeRel) + "/officeDocument", "word/document.xml");
    root.add("http://schemas.openxmlformats.org/package/2006/relationships/metadata/core-properties", "docProps/core.xml");

    Rels doc;
    doc.add(std::string(kOfficeRel) + "/styles", "styles.xml");
    if (macro) doc.add("http://schemas.microsoft.com/office/2006/relationships/vbaProject", "vbaProject.bin");

    std::string body;
    for (std::size_t i = 0; i < spec.paragraphs.size(); ++i) {
        body += "<w:p>";
        if (i == 0 && !spec.tab_stops.empty()) {
            body += "<w:pPr><w:tabs>";
            for (int pos : spec.tab_stops) body += "<w:tab w:val=\"left\" w:pos=\"" + std::to_string(pos) + "\"/>";
            body += "</w:tabs></w:pPr>";
        }
        body += "<w:r><w:t xml:space=\"preserve\">" + esc(spec.paragraphs[i]) + "</w:t></w:r></w:p>";
    }
    if (!spec.table.empty()) {
        body += "<w:tbl>";
        for (const auto& row : spec.table) {
            body += "<w:tr>";
            for (const auto& cell : row) body += "<w:tc><w:p><w:r><w:t>" + esc(cell) + "</w:t></w:r></w:p></w:tc>";
            body += "</w:tr>";
        }
        body += "</w:tbl>";
    }
    for (const auto& url : spec.hyperlinks) {
        auto id = doc.add(std::string(kOfficeRel) + "/hyperlink", url, true);
        body += "<w:p><w:hyperlink r:id=\"" + id + "\"><w:r><w:t>" + esc(url) + "</w:t></w:r></w:hyperlink></w:p>";
    }
    for (const auto& instr : spec.field_instructions) {
        body += "<w:p><w:r><w:fldChar w:fldCharType=\"begin\"/></w:r>";
        if (spec.split_instructions && instr.size() >= 2) {
            const std::size_t half = instr.size() / 2;
            body += "<w:r><w:instrText xml:space=\"preserve\">" + esc(instr.substr(0, half)) + "</w:instrText></w:r>";
            body += "<w:r><w:instrText xml:space=\"preserve\">" + esc(instr.substr(half)) + "</w:instrText></w:r>";
        } else {
            body += "<w:r><w:instrText xml:space=\"preserve\">" + esc(instr) + "</w:instrText></w:r>";
        }
        body += "<w:r><w:fldChar w:fldCharType=\"separate\"/></w:r><w:r><w:t>!</w:t></w:r>"
                "<w:r><w:fldChar w:fldCharType=\"end\"/></w:r></w:p>";
    }
    std::vector<std::pair<std::string, const OleObjectSpec*>> embeddings;
    for (std::size_t i = 0; i < spec.ole_objects.size(); ++i) {
        const auto& o = spec.ole_objects[i];
        std::string part = "embeddings/oleObject" + std::to_string(i + 1) + "." + o.extension;
        auto id = doc.add(std::string(kOfficeRel) + "/oleObject", part);
        body += "<w:p><w:r><w:object><o:OLEObject Type=\"Embed\"";
        if (!o.prog_id.empty()) body += " ProgID=\"" + esc(o.prog_id) + "\"";
        body += " ShapeID=\"_x0000_i10" + std::to_string(25 + i) + "\" DrawAspect=\"Icon\" ObjectID=\"_1" +
                std::to_string(100000 + i) + "\" r:id=\"" + id + "\"/></w:object></w:r></w:p>";
        embeddings.emplace_back("word/" + part, &o);
    }
    body += "<w:sectPr><w:pgSz w:w=\"12240\" w:h=\"15840\"/></w:sectPr>";

    std::string document = std::string(kXmlDecl) +
                           "<w:document xmlns:w=\"http://schemas.openxmlformats.org/wordprocessingml/2006/main\" "
                           "xmlns:r=\"" + kOfficeRel + "\" xmlns:o=\"urn:schemas-microsoft-com:office:office\"><w:body>" +
                           body + "</w:body></w:document>";
    std::string styles = std::string(kXmlDecl) +
                         "<w:styles xmlns:w=\"http://schemas.openxmlformats.org/wordprocessingml/2006/main\">"
                         "<w:style w:type=\"paragraph\" w:default=\"1\" w:styleId=\"Normal\"><w:name w:val=\"Normal\"/></w:style>"
                         "</w:styles>";

    ZipWriter zip;
    zip.add("[Content_Types].xml", types);
    zip.add("_rels/.rels", root.str());
    zip.add("docProps/core.xml", core_props(spec.title));
    zip.add("word/document.xml", document);
    zip.add("word/styles.xml", styles);
    zip.add("word/_rels/document.xml.rels", doc.str());
    if (macro) zip.add("word/vbaProject.bin", *spec.vba_project);
    for (const auto& [name, o] : embeddings) zip.add(name, o->data);
    return zip.finish();
}

Bytes build_xlsx(const XlsxSpec& spec) {
    const bool macro = spec.vba_project.has_value();
    std::vector<std::string> shared;
    auto shared_index = [&](const std::string& s) {
        for (std::size_t i = 0; i < shared.size(); ++i)
            if (shared[i] == s) return i;
        shared.push_back(s);
        return shared.size() - 1;
    };

    std::string types = std::string(kXmlDecl) +
                        "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">"
                        "<Default Extension=\"rels\" ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>"
                        "<Default Extension=\"xml\" ContentType=\"application/xml\"/>";
    std::set<std::string> image_exts;
    for (const auto& img : spec.images) image_exts.insert(img.extension);
    for (const auto& ext : image_exts) types += "<Default Extension=\"" + esc(ext) + "\" ContentType=\"image/" + esc(ext) + "\"/>";
    if (macro) types += "<Default Extension=\"bin\" ContentType=\"application/vnd.ms-office.vbaProject\"/>";
    types += std::string("<Override PartName=\"/xl/workbook.xml\" ContentType=\"") +
             (macro ? "application/vnd.ms-excel.sheet.macroEnabled.main+xml"
                    : "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml") +
             "\"/>";

    Rels root;
    root.add(std::string(kOfficeRel) + "/officeDocument", "xl/workbook.xml");
    root.add("http://schemas.openxmlformats.org/package/2006/relationships/metadata/core-properties", "docProps/core.xml");
    Rels wb;

    ZipWriter zip;
    std::string sheets_xml;
    for (std::size_t s = 0; s < spec.sheets.size(); ++s) {
        const auto& sheet = spec.sheets[s];
        const std::string part = "worksheets/sheet" + std::to_string(s + 1) + ".xml";
        auto id = wb.add(std::string(kOfficeRel) + "/worksheet", part);
        types += "<Override PartName=\"/xl/" + part +
                 "\" ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml\"/>";
        sheets_xml += "<sheet name=\"" + esc(sheet.name) + "\" sheetId=\"" + std::to_string(s + 1) + "\"";
        if (!sheet.state.empty()) sheets_xml += " state=\"" + sheet.state + "\"";
        sheets_xml += " r:id=\"" + id + "\"/>";

        Rels sheet_rels;
        std::string data;
        for (std::size_t r = 0; r < sheet.rows.size(); ++r) {
            data += "<row r=\"" + std::to_string(r + 1) + "\">";
            for (std::size_t c = 0; c < sheet.rows[r].size(); ++c) {
                const auto& cell = sheet.rows[r][c];
                const std::string ref = column_name(c) + std::to_string(r + 1);
                switch (cell.kind) {
                    case XlsxCell::Kind::empty: data += "<c r=\"" + ref + "\"/>"; break;
                    case XlsxCell::Kind::number: data += "<c r=\"" + ref + "\"><v>" + num(cell.number) + "</v></c>"; break;
                    case XlsxCell::Kind::shared_string:
                        data += "<c r=\"" + ref + "\" t=\"s\"><v>" + std::to_string(shared_index(cell.text)) + "</v></c>";
                        break;
                    case XlsxCell::Kind::inline_string:
                        data += "<c r=\"" + ref + "\" t=\"inlineStr\"><is><t>" + esc(cell.text) + "</t></is></c>";
                        break;
                    case XlsxCell::Kind::formula:
                        data += "<c r=\"" + ref + "\"><f>" + esc(cell.text) + "</f><v>" + num(cell.number) + "</v></c>";
                        break;
                }
            }
            data += "</row>";
        }
        std::string links;
        for (std::size_t h = 0; h < sheet.hyperlinks.size(); ++h) {
            auto hid = sheet_rels.add(std::string(kOfficeRel) + "/hyperlink", sheet.hyperlinks[h], true);
            links += "<hyperlink ref=\"A" + std::to_string(h + 1) + "\" r:id=\"" + hid + "\"/>";
        }
        std::string drawing;
        if (s == 0 && !spec.images.empty()) {
            auto did = sheet_rels.add(std::string(kOfficeRel) + "/drawing", "../drawings/drawing1.xml");
            drawing = "<drawing r:id=\"" + did + "\"/>";
        }
        std::string xml = std::string(kXmlDecl) +
                          "<worksheet xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\" xmlns:r=\"" +
                          kOfficeRel + "\"><sheetData>" + data + "</sheetData>" +
                          (sheet.protect ? "<sheetProtection sheet=\"1\" objects=\"1\"/>" : "") +
                          (links.empty() ? "" : "<hyperlinks>" + links + "</hyperlinks>") + drawing + "</worksheet>";
        zip.add("xl/" + part, xml);
        if (!sheet_rels.xml.empty())
            zip.add("xl/worksheets/_rels/sheet" + std::to_string(s + 1) + ".xml.rels", sheet_rels.str());
    }

    if (!spec.images.empty()) {
        Rels drels;
        std::string anchors;
        for (std::size_t i = 0; i < spec.images.size(); ++i) {
            const std::string media = "media/image" + std::to_string(i + 1) + "." + spec.images[i].extension;
            auto id = drels.add(std::string(kOfficeRel) + "/image", "../" + media);
            anchors += "<xdr:oneCellAnchor><xdr:from><xdr:col>" + std::to_string(i) +
                       "</xdr:col><xdr:row>0</xdr:row></xdr:from><xdr:pic><xdr:blipFill><a:blip r:embed=\"" + id +
                       "\"/></xdr:blipFill></xdr:pic></xdr:oneCellAnchor>";
            zip.add("xl/" + media, spec.images[i].data, false);
        }
        zip.add("xl/drawings/drawing1.xml",
                std::string(kXmlDecl) +
                    "<xdr:wsDr xmlns:xdr=\"http://schemas.openxmlformats.org/drawingml/2006/spreadsheetDrawing\" "
                    "xmlns:a=\"http://schemas.openxmlformats.org/drawingml/2006/main\" xmlns:r=\"" + kOfficeRel + "\">" +
                    anchors + "</xdr:wsDr>");
        zip.add("xl/drawings/_rels/drawing1.xml.rels", drels.str());
        types += "<Override PartName=\"/xl/drawings/drawing1.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.drawing+xml\"/>";
    }

    if (!shared.empty()) {
        wb.add(std::string(kOfficeRel) + "/sharedStrings", "sharedStrings.xml");
        std::string sst = std::string(kXmlDecl) + "<sst xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\" count=\"" +
                          std::to_string(shared.size()) + "\" uniqueCount=\"" + std::to_string(shared.size()) + "\">";
        for (const auto& s : shared) sst += "<si><t xml:space=\"preserve\">" + esc(s) + "</t></si>";
        sst += "</sst>";
        zip.add("xl/sharedStrings.xml", sst);
        types += "<Override PartName=\"/xl/sharedStrings.xml\" ContentType=\"application/vnd.openxmlformats-officedocument.spreadsheetml.sharedStrings+xml\"/>";
    }
    if (macro) {
        wb.add("http://schemas.microsoft.com/office/2006/relationships/vbaProject", "vbaProject.bin");
        zip.add("xl/vbaProject.bin", *spec.vba_project);
    }
    if (spec.remote_template_url)
        wb.add(std::string(kOfficeRel) + "/attachedTemplate", *spec.remote_template_url, true);

    std::string names;
    for (const auto& [name, formula] : spec.defined_names)
        names += "<definedName name=\"" + esc(name) + "\">" + esc(formula) + "</definedName>";
    std::string workbook = std::string(kXmlDecl) +
                           "<workbook xmlns=\"http://schemas.openxmlformats.org/spreadsheetml/2006/main\" xmlns:r=\"" +
                           kOfficeRel + "\"><sheets>" + sheets_xml + "</sheets>" +
                           (names.empty() ? "" : "<definedNames>" + names + "</definedNames>") + "</workbook>";
    types += "<Override PartName=\"/docProps/core.xml\" ContentType=\"application/vnd.openxmlformats-package.core-properties+xml\"/></Types>";

    zip.add("[Content_Types].xml", types);
    zip.add("_rels/.rels", root.str());
    zip.add("docProps/core.xml", core_props("Workbook"));
    zip.add("xl/workbook.xml", workbook);
    zip.add("xl/_rels/workbook.xml.rels", wb.str());
    return zip.finish();
}

}  // namespace phishlens::synth
