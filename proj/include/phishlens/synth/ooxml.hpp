#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phishlens/bytes.hpp"

namespace phishlens::synth {

struct OleObjectSpec {
    std::string prog_id;    // empty: no ProgID attribute
    std::string extension;  // embedding part extension, e.g. "bin"
    Bytes data;
};

struct DocxSpec {
    std::vector<std::string> paragraphs;
    std::vector<std::vector<std::string>> table;  // rows of cells; empty for none
    std::vector<int> tab_stops;                   // w:tab w:pos values in the first paragraph
    std::optional<Bytes> vba_project;
    std::vector<std::string> field_instructions;  // complex-field instrText
    bool split_instructions = false;              // split each instruction across two runs
    std::vector<OleObjectSpec> ole_objects;
    std::vector<std::string> hyperlinks;          // external targets
    std::string title;
};

Bytes build_docx(const DocxSpec& spec);

struct XlsxCell {
    enum class Kind { empty, number, shared_string, inline_string, formula } kind = Kind::empty;
    double number = 0.0;
    std::string text;  // string value or formula body

    static XlsxCell num(double v) { return {Kind::number, v, {}}; }
    static XlsxCell str(std::string s) { return {Kind::shared_string, 0.0, std::move(s)}; }
    static XlsxCell inline_str(std::string s) { return {Kind::inline_string, 0.0, std::move(s)}; }
    static XlsxCell formula(std::string f, double cached = 0.0) { return {Kind::formula, cached, std::move(f)}; }
    static XlsxCell blank() { return {}; }
};

struct XlsxSheet {
    std::string name;
    std::vector<std::vector<XlsxCell>> rows;
    std::string state;  // "", "hidden", "veryHidden"
    bool protect = false;
    std::vector<std::string> hyperlinks;  // external URLs attached to A1, A2, ...
};

struct XlsxImage {
    std::string extension;  // "png", "jpeg", ...
    Bytes data;
};

struct XlsxSpec {
    std::vector<XlsxSheet> sheets;
    std::optional<Bytes> vba_project;
    std::optional<std::string> remote_template_url;
    std::vector<std::pair<std::string, std::string>> defined_names;  // name, formula
    std::vector<XlsxImage> images;
};

Bytes build_xlsx(const XlsxSpec& spec);

}  // namespace phishlens::synth
