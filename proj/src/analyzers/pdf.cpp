#include "phishlens/pdf.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>

namespace phishlens {
namespace {

constexpr std::size_t kStreamInflateCap = 16u << 20;
constexpr std::size_t kTotalInflateCap = 64u << 20;

bool is_ws(std::uint8_t c) noexcept { return c == 0 || c == 9 || c == 10 || c == 12 || c == 13 || c == 32; }
bool is_delim(std::uint8_t c) noexcept {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' || c == '}' || c == '/' ||
           c == '%';
}
bool is_regular(std::uint8_t c) noexcept { return !is_ws(c) && !is_delim(c); }
int hex_value(std::uint8_t c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

struct Tok {
    enum Kind { name, string, number, keyword, open_array, close_array, open_dict, close_dict } kind;
    std::string text;  // decoded name / string bytes, number or keyword spelling
    bool obfuscated = false;
};

struct StreamInfo {
    std::size_t begin = 0, end = 0;  // raw data range in the file
    std::vector<std::string> filters;
    std::string type, subtype;
    bool font_program = false;
};

struct ObjectInfo {
    long number = -1;
    std::size_t first_tok = 0, last_tok = 0;  // token range [first, last)
};

std::optional<long> as_integer(const Tok& t) {
    if (t.kind != Tok::number || t.text.empty() || t.text.find('.') != std::string::npos) return std::nullopt;
    long v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) return std::nullopt;
    return v;
}

// Inflate a zlib stream up to `cap` bytes. Corrupt data yields whatever decoded so far.
Bytes flate_decode(ByteView in, std::size_t cap) {
    Bytes out;
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) return out;
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(std::min<std::size_t>(in.size(), 0xFFFFFFFFu));
    std::uint8_t buf[16384];
    for (;;) {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        int rc = inflate(&zs, Z_NO_FLUSH);
        std::size_t produced = sizeof buf - zs.avail_out;
        out.insert(out.end(), buf, buf + std::min(produced, cap - out.size()));
        if (out.size() >= cap || rc != Z_OK || produced == 0) break;
    }
    inflateEnd(&zs);
    return out;
}

class Lexer {
public:
    Lexer(ByteView data, bool top_level) : d_(data), top_(top_level) {}

    std::vector<Tok> tokens;
    std::vector<StreamInfo> streams;
    std::vector<ObjectInfo> objects;
    std::vector<std::size_t> stream_tok;  // token index of each "stream" keyword
    std::size_t endstream_count = 0;
    std::size_t unterminated_streams = 0;

    void run() {
        std::optional<std::size_t> open_obj;
        while (pos_ < d_.size()) {
            std::uint8_t c = d_[pos_];
            if (is_ws(c)) {
                ++pos_;
            } else if (c == '%') {
                while (pos_ < d_.size() && d_[pos_] != '\n' && d_[pos_] != '\r') ++pos_;
            } else if (c == '(') {
                tokens.push_back({Tok::string, literal_string(), false});
            } else if (c == '<') {
                if (pos_ + 1 < d_.size() && d_[pos_ + 1] == '<') {
                    tokens.push_back({Tok::open_dict, "<<", false});
                    pos_ += 2;
                } else {
                    tokens.push_back({Tok::string, hex_string(), false});
                }
            } else if (c == '>') {
                if (pos_ + 1 < d_.size() && d_[pos_ + 1] == '>') {
                    tokens.push_back({Tok::close_dict, ">>", false});
                    pos_ += 2;
                } else {
                    ++pos_;
                }
            } else if (c == '[') {
                tokens.push_back({Tok::open_array, "[", false});
                ++pos_;
            } else if (c == ']') {
                tokens.push_back({Tok::close_array, "]", false});
                ++pos_;
            } else if (c == '/') {
                tokens.push_back(name());
            } else if (c == '{' || c == '}' || c == ')') {
                ++pos_;
            } else {
                std::size_t start = pos_;
                while (pos_ < d_.size() && is_regular(d_[pos_])) ++pos_;
                std::string word(as_chars(d_.subspan(start, pos_ - start)));
                bool numeric = !word.empty() && word.find_first_not_of("0123456789.+-") == std::string::npos;
                tokens.push_back({numeric ? Tok::number : Tok::keyword, std::move(word), false});
                const Tok& t = tokens.back();
                if (t.kind != Tok::keyword) continue;
                if (t.text == "obj" && tokens.size() >= 3 && as_integer(tokens[tokens.size() - 2]) &&
                    as_integer(tokens[tokens.size() - 3])) {
                    if (open_obj) objects[*open_obj].last_tok = tokens.size() - 3;
                    objects.push_back({*as_integer(tokens[tokens.size() - 3]), tokens.size(), tokens.size()});
                    open_obj = objects.size() - 1;
                } else if (t.text == "endobj") {
                    if (open_obj) objects[*open_obj].last_tok = tokens.size() - 1;
                    open_obj.reset();
                } else if (t.text == "endstream") {
                    ++endstream_count;
                } else if (t.text == "stream" && top_) {
                    begin_stream(open_obj ? objects[*open_obj].first_tok : 0);
                } else if (t.text == "ID" && !top_) {
                    skip_inline_image();
                }
            }
        }
        if (open_obj) objects[*open_obj].last_tok = tokens.size();
    }

private:
    std::string literal_string() {
        std::string out;
        int depth = 1;
        ++pos_;
        while (pos_ < d_.size()) {
            std::uint8_t c = d_[pos_++];
            if (c == '\\') {
                if (pos_ >= d_.size()) break;
                std::uint8_t e = d_[pos_++];
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 'r': out += '\r'; break;
                    case 't': out += '\t'; break;
                    case 'b': out += '\b'; break;
                    case 'f': out += '\f'; break;
                    case '\r':
                        if (pos_ < d_.size() && d_[pos_] == '\n') ++pos_;
                        break;
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int v = e - '0';
                            for (int k = 0; k < 2 && pos_ < d_.size() && d_[pos_] >= '0' && d_[pos_] <= '7'; ++k)
                                v = v * 8 + (d_[pos_++] - '0');
                            out += static_cast<char>(v & 0xFF);
                        } else {
                            out += static_cast<char>(e);
                        }
                }
            } else if (c == '(') {
                ++depth;
                out += '(';
            } else if (c == ')') {
                if (--depth == 0) break;
                out += ')';
            } else {
                out += static_cast<char>(c);
            }
        }
        return out;
    }

    std::string hex_string() {
        std::string out;
        ++pos_;
        int hi = -1;
        while (pos_ < d_.size() && d_[pos_] != '>') {
            int v = hex_value(d_[pos_++]);
            if (v < 0) continue;
            if (hi < 0) {
                hi = v;
            } else {
                out += static_cast<char>(hi * 16 + v);
                hi = -1;
            }
        }
        if (hi >= 0) out += static_cast<char>(hi * 16);
        if (pos_ < d_.size()) ++pos_;
        return out;
    }

    Tok name() {
        Tok t{Tok::name, {}, false};
        ++pos_;
        while (pos_ < d_.size() && is_regular(d_[pos_])) {
            std::uint8_t c = d_[pos_];
            if (c == '#' && pos_ + 2 < d_.size() && hex_value(d_[pos_ + 1]) >= 0 &&
                hex_value(d_[pos_ + 2]) >= 0) {
                t.text += static_cast<char>(hex_value(d_[pos_ + 1]) * 16 + hex_value(d_[pos_ + 2]));
                t.obfuscated = true;
                pos_ += 3;
                continue;
            }
            t.text += static_cast<char>(c);
            ++pos_;
        }
        return t;
    }

    // Value token following /key inside tokens [from, to).
    std::optional<std::size_t> lookup(std::size_t from, std::size_t to, std::string_view key) const {
        std::optional<std::size_t> found;
        for (std::size_t i = from; i + 1 < to; ++i)
            if (tokens[i].kind == Tok::name && tokens[i].text == key) found = i + 1;
        return found;
    }

    void begin_stream(std::size_t obj_first) {
        std::size_t here = tokens.size() - 1;
        stream_tok.push_back(here);
        StreamInfo s;
        if (auto v = lookup(obj_first, here, "Filter")) {
            if (tokens[*v].kind == Tok::name) {
                s.filters.push_back(tokens[*v].text);
            } else if (tokens[*v].kind == Tok::open_array) {
                for (std::size_t i = *v + 1; i < here && tokens[i].kind != Tok::close_array; ++i)
                    if (tokens[i].kind == Tok::name) s.filters.push_back(tokens[i].text);
            }
        }
        if (auto v = lookup(obj_first, here, "Type"); v && tokens[*v].kind == Tok::name) s.type = tokens[*v].text;
        if (auto v = lookup(obj_first, here, "Subtype"); v && tokens[*v].kind == Tok::name) s.subtype = tokens[*v].text;
        s.font_program = lookup(obj_first, here, "Length1") || lookup(obj_first, here, "Length2") ||
                         lookup(obj_first, here, "Length3");
        std::optional<long> length;
        if (auto v = lookup(obj_first, here, "Length")) {
            bool indirect = *v + 2 < tokens.size() && tokens[*v + 2].kind == Tok::keyword && tokens[*v + 2].text == "R";
            if (!indirect) length = as_integer(tokens[*v]);
        }

        std::size_t start = pos_;
        if (start < d_.size() && d_[start] == '\r') ++start;
        if (start < d_.size() && d_[start] == '\n') ++start;
        s.begin = start;

        auto endstream_at = [&](std::size_t p) {
            while (p < d_.size() && is_ws(d_[p])) ++p;
            return as_chars(d_.subspan(std::min(p, d_.size()))).starts_with("endstream");
        };
        if (length && *length >= 0 && static_cast<std::size_t>(*length) <= d_.size() - start &&
            endstream_at(start + static_cast<std::size_t>(*length))) {
            s.end = start + static_cast<std::size_t>(*length);
        } else {
            auto text = as_chars(d_);
            auto p = text.find("endstream", start);
            if (p == std::string_view::npos) {
                ++unterminated_streams;
                s.end = d_.size();
            } else {
                s.end = p;
                if (s.end > start && d_[s.end - 1] == '\n') --s.end;
                if (s.end > start && d_[s.end - 1] == '\r') --s.end;
            }
        }
        pos_ = s.end;
        streams.push_back(std::move(s));
    }

    void skip_inline_image() {
        auto text = as_chars(d_);
        for (std::size_t p = pos_; p + 1 < text.size(); ++p) {
            if (text[p] == 'E' && text[p + 1] == 'I' && p > 0 && is_ws(d_[p - 1]) &&
                (p + 2 >= text.size() || !is_regular(d_[p + 2]))) {
                pos_ = p + 2;
                return;
            }
        }
        pos_ = d_.size();
    }

    ByteView d_;
    bool top_;
    std::size_t pos_ = 0;
};

// Bytes of string operands shown by text operators in a content stream.
std::size_t shown_text_bytes(ByteView content) {
    Lexer lex(content, false);
    lex.run();
    std::size_t total = 0, pending = 0;
    for (const auto& t : lex.tokens) {
        if (t.kind == Tok::string) {
            pending += t.text.size();
        } else if (t.kind == Tok::keyword) {
            if (t.text == "Tj" || t.text == "TJ" || t.text == "'" || t.text == "\"") total += pending;
            pending = 0;
        }
    }
    return total;
}

std::size_t text_chars(std::string_view s) {
    if (s.size() >= 2 && static_cast<unsigned char>(s[0]) == 0xFE && static_cast<unsigned char>(s[1]) == 0xFF)
        return (s.size() - 2) / 2;
    return s.size();
}

std::optional<long> uri_port(std::string_view uri) {
    auto scheme_end = uri.find("://");
    if (scheme_end == std::string_view::npos) return std::nullopt;
    auto rest = uri.substr(scheme_end + 3);
    auto host_end = rest.find_first_of("/?#");
    auto authority = rest.substr(0, host_end);
    if (auto at = authority.rfind('@'); at != std::string_view::npos) authority.remove_prefix(at + 1);
    std::size_t colon;
    if (!authority.empty() && authority.front() == '[') {
        auto close = authority.find(']');
        if (close == std::string_view::npos || close + 1 >= authority.size() || authority[close + 1] != ':')
            return std::nullopt;
        colon = close + 1;
    } else {
        colon = authority.rfind(':');
        if (colon == std::string_view::npos) return std::nullopt;
    }
    auto digits = authority.substr(colon + 1);
    if (digits.empty()) return std::nullopt;
    long port = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
    if (ec != std::errc() || p != digits.data() + digits.size()) return std::nullopt;
    return port;
}

const std::set<std::string> kRiskyNames = {"JavaScript", "Launch", "OpenAction", "AA", "SubmitForm", "EmbeddedFile"};

// Name-level counters shared by top-level objects and object-stream members.
void count_names(const std::vector<Tok>& toks, std::size_t from, std::size_t to, PdfFeatures& f,
                 std::vector<std::string>& uris) {
    for (std::size_t i = from; i < to; ++i) {
        const Tok& t = toks[i];
        if (t.kind != Tok::name) continue;
        if (t.obfuscated) f.name_obfuscation_count += 1;
        const std::string& n = t.text;
        const Tok* next = i + 1 < to ? &toks[i + 1] : nullptr;
        if (n == "JavaScript") f.javascript_count += 1;
        else if (n == "JS") f.js_count += 1;
        else if (n == "URI") {
            // "/S /URI" names the action type; the /URI key that follows is the one counted
            if (i > from && toks[i - 1].kind == Tok::name && toks[i - 1].text == "S") continue;
            f.uri_count += 1;
            if (next && next->kind == Tok::string) uris.push_back(next->text);
        } else if (n == "Launch") f.launch_count += 1;
        else if (n == "OpenAction") f.openaction_count += 1;
        else if (n == "AA") f.aa_count += 1;
        else if (n == "SubmitForm") f.submitform_count += 1;
        else if (n == "GoToR") f.goto_remote_count += 1;
        else if (n == "AcroForm") f.acroform_present = 1;
        else if (n == "XFA") f.xfa_present = 1;
        else if (n == "RichMedia") f.richmedia_count += 1;
        else if (n == "Encrypt") f.is_encrypted = 1;
        else if (n == "Type" && next && next->kind == Tok::name) {
            if (next->text == "Page") f.page_count += 1;
            else if (next->text == "Font") f.font_object_count += 1;
        } else if (n == "Filter" && next) {
            std::vector<std::string> filters;
            if (next->kind == Tok::name) {
                filters.push_back(next->text);
            } else if (next->kind == Tok::open_array) {
                for (std::size_t j = i + 2; j < to && toks[j].kind != Tok::close_array; ++j)
                    if (toks[j].kind == Tok::name) filters.push_back(toks[j].text);
                if (filters.size() >= 2) f.nested_filter_count += 1;
            }
            for (const auto& fl : filters) {
                f.total_filters += 1;
                if (fl == "LZWDecode" || fl == "LZW") f.lzw_count += 1;
                if (fl == "JBIG2Decode") f.jbig2_count += 1;
            }
        }
    }
}

bool risky_object(const std::vector<Tok>& toks, std::size_t from, std::size_t to) {
    std::set<std::string_view> seen;
    for (std::size_t i = from; i < to; ++i)
        if (toks[i].kind == Tok::name && kRiskyNames.count(toks[i].text)) seen.insert(toks[i].text);
    return seen.size() >= 2;
}

}  // namespace

const SchemaPtr& pdf_schema() {
    static const SchemaPtr schema = [] {
        std::vector<std::string> cols;
#define PHISHLENS_NAME(name) cols.emplace_back(#name);
        PHISHLENS_PDF_FEATURES(PHISHLENS_NAME)
#undef PHISHLENS_NAME
        return std::make_shared<const FeatureSchema>(FormatKind::pdf, std::move(cols), 1);
    }();
    return schema;
}

const SchemaPtr& pdf_selected_schema() {
    static const SchemaPtr schema = [] {
        const std::vector<std::string> names = {"text_length",  "total_filters",   "title_chars",   "file_size",
                                                "object_count", "stream_count",    "endstream_count", "metadata_size",
                                                "valid_pdf_header", "entropy_of_streams"};
        return project_schema(*pdf_schema(), names);
    }();
    return schema;
}

FeatureVector PdfFeatures::to_vector() const {
    std::vector<double> v;
#define PHISHLENS_VALUE(name) v.push_back(name);
    PHISHLENS_PDF_FEATURES(PHISHLENS_VALUE)
#undef PHISHLENS_VALUE
    return FeatureVector(pdf_schema(), std::move(v));
}

PdfAnalysis extract_pdf(ByteView data) {
    PdfAnalysis out;
    auto& f = out.features;
    f.file_size = static_cast<double>(data.size());

    auto head = as_chars(data.first(std::min<std::size_t>(data.size(), 1024)));
    if (auto p = head.find("%PDF-"); p != std::string_view::npos && p + 5 < head.size() &&
                                     head[p + 5] >= '0' && head[p + 5] <= '9')
        f.valid_pdf_header = 1;
    else
        out.warnings.push_back("no %PDF- header in the first 1024 bytes");

    Lexer lex(data, true);
    lex.run();
    const auto& toks = lex.tokens;

    f.object_count = static_cast<double>(lex.objects.size());
    f.stream_count = static_cast<double>(lex.streams.size());
    f.endstream_count = static_cast<double>(lex.endstream_count);
    if (lex.unterminated_streams) out.warnings.push_back(std::to_string(lex.unterminated_streams) + " stream(s) without endstream");

    std::vector<std::string> uris;
    count_names(toks, 0, toks.size(), f, uris);
    for (const auto& obj : lex.objects)
        if (risky_object(toks, obj.first_tok, std::min(obj.last_tok, toks.size()))) f.risky_cooccurrence_count += 1;

    // xref sections, trailer and startxref keywords
    bool in_xref = false;
    for (const auto& t : toks) {
        if (t.kind != Tok::keyword) continue;
        if (t.text == "xref") {
            f.xref_table_count += 1;
            in_xref = true;
        } else if (t.text == "trailer") {
            f.trailer_present = 1;
            in_xref = false;
        } else if (t.text == "startxref") {
            f.startxref_present = 1;
            in_xref = false;
        } else if (in_xref && (t.text == "n" || t.text == "f")) {
            f.xref_entry_count += 1;
        } else {
            in_xref = false;
        }
    }

    // Per-object title and string payloads, used for /Info metadata.
    std::optional<long> info_obj;
    for (std::size_t i = 0; i + 3 < toks.size(); ++i)
        if (toks[i].kind == Tok::name && toks[i].text == "Info" && as_integer(toks[i + 1]) && as_integer(toks[i + 2]) &&
            toks[i + 3].kind == Tok::keyword && toks[i + 3].text == "R")
            info_obj = as_integer(toks[i + 1]);
    if (info_obj) {
        for (const auto& obj : lex.objects) {
            if (obj.number != *info_obj) continue;
            std::size_t end = std::min(obj.last_tok, toks.size());
            for (std::size_t i = obj.first_tok; i < end; ++i) {
                if (toks[i].kind == Tok::string) f.metadata_size += static_cast<double>(toks[i].text.size());
                if (toks[i].kind == Tok::name && toks[i].text == "Title" && i + 1 < end && toks[i + 1].kind == Tok::string)
                    f.title_chars = static_cast<double>(text_chars(toks[i + 1].text));
            }
        }
    }

    std::size_t inflated_total = 0;
    double entropy_sum = 0, size_sum = 0, embedded_sum = 0;
    for (std::size_t si = 0; si < lex.streams.size(); ++si) {
        const auto& s = lex.streams[si];
        ByteView raw = data.subspan(s.begin, s.end - s.begin);
        entropy_sum += shannon_entropy(raw);
        size_sum += static_cast<double>(raw.size());
        if (s.type == "XRef") {
            f.xref_table_count += 1;
            f.trailer_present = 1;
        }
        if (s.type == "Metadata") f.metadata_size += static_cast<double>(raw.size());
        if (s.type == "ObjStm") f.objstm_count += 1;
        if (s.type == "EmbeddedFile") {
            f.embedded_file_count += 1;
            embedded_sum += static_cast<double>(raw.size());
        }
        if (s.subtype == "Image") f.embedded_image_count += 1;

        bool plain = s.filters.empty();
        bool flate = s.filters.size() == 1 && (s.filters[0] == "FlateDecode" || s.filters[0] == "Fl");
        if (!plain && !flate) continue;
        Bytes decoded;
        ByteView content = raw;
        if (flate) {
            if (inflated_total >= kTotalInflateCap) continue;
            decoded = flate_decode(raw, std::min(kStreamInflateCap, kTotalInflateCap - inflated_total));
            inflated_total += decoded.size();
            content = decoded;
        }
        if (s.type == "ObjStm") {
            // Members of an object stream: header of "num offset" pairs, then bodies from /First.
            Lexer header_lex(content, false);
            header_lex.run();
            std::optional<long> first;
            std::size_t stream_obj_first = 0;
            for (const auto& obj : lex.objects)
                if (obj.first_tok <= lex.stream_tok[si] && lex.stream_tok[si] < obj.last_tok) stream_obj_first = obj.first_tok;
            for (std::size_t i = stream_obj_first; i + 1 < lex.stream_tok[si]; ++i)
                if (toks[i].kind == Tok::name && toks[i].text == "First") first = as_integer(toks[i + 1]);
            if (!first || *first < 0 || static_cast<std::size_t>(*first) > content.size()) continue;
            Lexer body(content.subspan(static_cast<std::size_t>(*first)), false);
            body.run();
            count_names(body.tokens, 0, body.tokens.size(), f, uris);
            std::vector<std::size_t> offsets;
            for (std::size_t i = 1; i < header_lex.tokens.size(); i += 2) {
                auto off = as_integer(header_lex.tokens[i]);
                if (!off || header_lex.tokens[i].kind != Tok::number) break;
                if (*off < 0 || static_cast<std::size_t>(*first + *off) > content.size()) break;
                offsets.push_back(static_cast<std::size_t>(*first + *off));
                if (offsets.size() > 100000) break;
            }
            std::sort(offsets.begin(), offsets.end());
            for (std::size_t k = 0; k < offsets.size(); ++k) {
                std::size_t end = k + 1 < offsets.size() ? offsets[k + 1] : content.size();
                Lexer member(content.subspan(offsets[k], end - offsets[k]), false);
                member.run();
                if (risky_object(member.tokens, 0, member.tokens.size())) f.risky_cooccurrence_count += 1;
            }
            continue;
        }
        if (s.type == "Metadata" || s.type == "XRef" || s.type == "EmbeddedFile" || s.subtype == "Image" ||
            s.font_program)
            continue;
        f.text_length += static_cast<double>(shown_text_bytes(content));
    }
    if (!lex.streams.empty()) {
        f.entropy_of_streams = entropy_sum / static_cast<double>(lex.streams.size());
        f.avg_stream_size = size_sum / static_cast<double>(lex.streams.size());
    }
    if (f.embedded_file_count > 0) f.avg_embedded_file_size = embedded_sum / f.embedded_file_count;

    for (const auto& uri : uris) {
        if (auto port = uri_port(uri); port && *port != 80 && *port != 443) f.nonstandard_port_flag = 1;
    }
    if (f.valid_pdf_header == 0 && f.object_count == 0) out.parse_failed = true;
    return out;
}

AnalysisReport analyze_pdf(ByteView data, std::string source_path) {
    auto result = extract_pdf(data);
    AnalysisReport report{std::move(source_path), FormatKind::pdf, result.features.to_vector(),
                          std::move(result.warnings), result.parse_failed};
    for (auto& col : report.features.sanitize()) report.warnings.push_back("non-finite value in " + col + " replaced by 0");
    return report;
}

FeatureVector project_top10_pdf(const PdfFeatures& features) {
    return features.to_vector().project(pdf_selected_schema());
}

}  // namespace phishlens
