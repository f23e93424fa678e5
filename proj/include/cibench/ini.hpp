#pragma once

#include <map>
#include <string>
#include <vector>

#include "cibench/common.hpp"

namespace cibench {

/// Minimal INI-style reader: `[section]` headers, `key = value` lines,
/// `#`/`;` comments. Section order and duplicate section names are preserved
/// (the dataset catalog lists one section per recipe).
struct IniSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    std::string require(const std::string& key) const;
};

struct IniFile {
    std::vector<IniSection> sections;

    const IniSection* find(const std::string& name) const;
    std::vector<const IniSection*> find_all_with_prefix(const std::string& prefix) const;
};

IniFile parse_ini(const std::string& path);
IniFile parse_ini_text(const std::string& text, const std::string& origin = "<string>");

std::string trim(const std::string& s);
std::vector<std::string> split_list(const std::string& s, char sep = ',');

double to_double(const std::string& s, const std::string& what);
long long to_int(const std::string& s, const std::string& what);
bool to_bool(const std::string& s, const std::string& what);

}  // namespace cibench
