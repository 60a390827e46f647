#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "phishlens/docx.hpp"
#include "phishlens/xlsx.hpp"

namespace phishlens {
namespace {

bool is_token_char(char c) noexcept {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$';
}

bool is_ident_char(char c) noexcept { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool is_hex_digit(char c) noexcept { return std::isxdigit(static_cast<unsigned char>(c)) != 0; }

// Leading declaration keyword of a line, skipping visibility modifiers.
std::string leading_keyword(const std::vector<std::string>& words) {
    for (const auto& w : words) {
        if (w == "public" || w == "private" || w == "friend" || w == "static") continue;
        return w;
    }
    return {};
}

}  // namespace

MacroMetrics compute_macro_metrics(std::string_view source, const std::vector<std::string>& keywords) {
    MacroMetrics m;
    if (source.empty()) return m;

    std::vector<std::string_view> lines;
    for (std::size_t start = 0; start <= source.size();) {
        auto nl = source.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < source.size()) lines.push_back(source.substr(start));
            break;
        }
        lines.push_back(source.substr(start, nl - start));
        start = nl + 1;
    }

    std::set<std::string> vocab;
    double trimmed_total = 0;
    for (auto raw : lines) {
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        m.max_line_length = std::max(m.max_line_length, static_cast<double>(line.size()));
        auto rtrimmed = line;
        while (!rtrimmed.empty() && std::isspace(static_cast<unsigned char>(rtrimmed.back()))) rtrimmed.remove_suffix(1);
        trimmed_total += static_cast<double>(rtrimmed.size());

        std::vector<std::string> words;  // lowercased identifier tokens outside strings/comments
        bool comment = false;
        std::size_t i = 0;
        while (i < line.size()) {
            char c = line[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (comment) {
                // comment text still yields tokens for the lexical vocabulary
                if (is_token_char(c)) {
                    std::size_t j = i;
                    while (j < line.size() && is_token_char(line[j])) ++j;
                    vocab.insert(to_lower(line.substr(i, j - i)));
                    m.token_count += 1;
                    i = j;
                } else {
                    vocab.insert(std::string(1, c));
                    m.token_count += 1;
                    ++i;
                }
                continue;
            }
            if (c == '"') {
                std::size_t j = i + 1;
                std::size_t len = 0;
                while (j < line.size()) {
                    if (line[j] == '"') {
                        if (j + 1 < line.size() && line[j + 1] == '"') {
                            ++len;
                            j += 2;
                            continue;
                        }
                        break;
                    }
                    ++len;
                    ++j;
                }
                m.string_literal_count += 1;
                m.max_string_literal_length = std::max(m.max_string_literal_length, static_cast<double>(len));
                vocab.insert(std::string(line.substr(i, std::min(j + 1, line.size()) - i)));
                m.token_count += 1;
                i = std::min(j + 1, line.size());
                continue;
            }
            if (c == '\'') {
                comment = true;
                vocab.insert("'");
                m.token_count += 1;
                ++i;
                continue;
            }
            if (c == '&' && i + 1 < line.size() && (line[i + 1] == 'H' || line[i + 1] == 'h') && i + 2 < line.size() &&
                is_hex_digit(line[i + 2])) {
                std::size_t j = i + 2;
                while (j < line.size() && is_hex_digit(line[j])) ++j;
                if (j < line.size() && line[j] == '&') ++j;  // long suffix
                m.hex_literal_count += 1;
                vocab.insert(to_lower(line.substr(i, j - i)));
                m.token_count += 1;
                i = j;
                continue;
            }
            if (is_token_char(c)) {
                std::size_t j = i;
                while (j < line.size() && is_token_char(line[j])) ++j;
                std::string word = to_lower(line.substr(i, j - i));
                if (word == "rem" && words.empty()) comment = true;
                if (word == "mod") m.arithmetic_operator_count += 1;
                if ((word == "chr" || word == "chrw" || word == "chr$" || word == "chrw$") &&
                    (i == 0 || !is_ident_char(line[i - 1]))) {
                    std::size_t k = j;
                    while (k < line.size() && (line[k] == ' ' || line[k] == '\t')) ++k;
                    if (k < line.size() && line[k] == '(') m.chr_count += 1;
                }
                words.push_back(word);
                vocab.insert(word);
                m.token_count += 1;
                i = j;
                continue;
            }
            switch (c) {
                case '+': case '-': case '*': case '/': case '\\': case '^':
                    m.arithmetic_operator_count += 1;
                    break;
                case '&':
                    m.concat_operator_count += 1;
                    break;
                default:
                    break;
            }
            vocab.insert(std::string(1, c));
            m.token_count += 1;
            ++i;
        }
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) m.char_count += 1;

        if (comment && (words.empty() || words.front() == "rem")) m.comment_line_count += 1;
        auto head = leading_keyword(words);
        if (head == "sub") m.sub_count += 1;
        if (head == "function") m.function_count += 1;
        if (head == "dim") m.dim_count += 1;
    }
    m.line_count = static_cast<double>(lines.size());
    m.avg_line_length = lines.empty() ? 0.0 : trimmed_total / static_cast<double>(lines.size());
    m.vocab_size = static_cast<double>(vocab.size());
    m.suspicious_keyword_count = static_cast<double>(count_vba_keywords(source, keywords));
    return m;
}

}  // namespace phishlens
