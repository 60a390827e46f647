#include "phishlens/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "phishlens/bytes.hpp"
#include "phishlens/error.hpp"

namespace phishlens {
namespace {

std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        auto comma = value.find(',', start);
        auto item = trim(value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (!item.empty()) out.push_back(to_lower(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

const AnalyzerConfig& AnalyzerConfig::defaults() {
    static const AnalyzerConfig config = [] {
        AnalyzerConfig c;
        c.version = 1;
        c.vba_keywords = {"autoopen",      "auto_open",    "autoclose", "document_open",     "workbook_open",
                          "shell",         "wscript.shell", "createobject", "getobject",      "powershell",
                          "cmd.exe",       "urldownloadtofile", "xmlhttp", "adodb.stream",   "savetofile",
                          "environ",       "callbyname",   "execute",   "chrw"};
        c.vba_api_keywords = {"declare",      "kernel32",     "user32",       "virtualalloc", "createthread",
                              "rtlmovememory", "shellexecute", "winexec",      "urlmon"};
        c.html_keywords = {"login", "password", "secure", "verify", "account", "bank", "update", "confirm"};
        c.url_shorteners = {"bit.ly", "tinyurl.com", "t.co", "goo.gl", "ow.ly", "is.gd"};
        c.base64_min_run = 24;
        return c;
    }();
    return config;
}

AnalyzerConfig parse_config(std::string_view text) {
    AnalyzerConfig config = AnalyzerConfig::defaults();
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        auto raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        start = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        auto hash = raw.find('#');
        auto line = trim(raw.substr(0, hash));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(Errc::parse_error, "config line " + std::to_string(line_no) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        try {
            if (key == "version") {
                config.version = std::stoi(std::string(value));
            } else if (key == "vba_keywords") {
                config.vba_keywords = split_list(value);
            } else if (key == "vba_api_keywords") {
                config.vba_api_keywords = split_list(value);
            } else if (key == "html_keywords") {
                config.html_keywords = split_list(value);
            } else if (key == "url_shorteners") {
                config.url_shorteners = split_list(value);
            } else if (key == "base64_min_run") {
                auto n = std::stol(std::string(value));
                if (n < 1) throw std::invalid_argument("must be >= 1");
                config.base64_min_run = static_cast<std::size_t>(n);
            } else {
                throw Error(Errc::parse_error, "config line " + std::to_string(line_no) + ": unknown key '" +
                                                   std::string(key) + "'");
            }
        } catch (const std::logic_error& e) {
            throw Error(Errc::parse_error, "config line " + std::to_string(line_no) + ": bad value for '" +
                                               std::string(key) + "': " + e.what());
        }
    }
    return config;
}

AnalyzerConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

AnalyzerConfig config_from_environment() {
    const char* path = std::getenv("PHISHLENS_CONFIG");
    if (path == nullptr || *path == '\0') return AnalyzerConfig::defaults();
    return load_config_file(path);
}

}  // namespace phishlens
