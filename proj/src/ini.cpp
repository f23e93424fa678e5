#include "cibench/ini.hpp"

#include <fstream>
#include <sstream>

namespace cibench {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(s);
    while (std::getline(ss, cur, sep)) {
        std::string t = trim(cur);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": not a number: '" + s + "'");
    }
}

long long to_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": not an integer: '" + s + "'");
    }
}

bool to_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(what + ": not a boolean: '" + s + "'");
}

bool IniSection::has(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return true;
    return false;
}

std::string IniSection::get(const std::string& key, const std::string& fallback) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    return fallback;
}

std::string IniSection::require(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return v;
    throw ConfigError("section [" + name + "] missing key '" + key + "'");
}

const IniSection* IniFile::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<const IniSection*> IniFile::find_all_with_prefix(const std::string& prefix) const {
    std::vector<const IniSection*> out;
    for (const auto& s : sections)
        if (s.name.rfind(prefix, 0) == 0) out.push_back(&s);
    return out;
}

IniFile parse_ini_text(const std::string& text, const std::string& origin) {
    IniFile file;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    IniSection* cur = nullptr;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            file.sections.push_back({trim(t.substr(1, t.size() - 2)), {}});
            cur = &file.sections.back();
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        if (!cur) {
            file.sections.push_back({"", {}});
            cur = &file.sections.back();
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        // strip trailing comment
        std::size_t cpos = val.find_first_of("#;");
        if (cpos != std::string::npos) val = trim(val.substr(0, cpos));
        cur->entries.emplace_back(key, val);
    }
    return file;
}

IniFile parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_ini_text(buf.str(), path);
}

}  // namespace cibench
