#include "rngsim/ini.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "rngsim/types.hpp"

namespace rngsim {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

IniFile IniFile::parse_string(const std::string& text, const std::string& origin) {
    IniFile ini;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        ini.values_[key] = val;
    }
    return ini;
}

std::string IniFile::get(const std::string& key, const std::string& def) const {
    touched_[key] = true;
    auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
}

std::int64_t IniFile::get_int(const std::string& key, std::int64_t def) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        size_t pos = 0;
        std::int64_t v = std::stoll(it->second, &pos, 0);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + it->second + "'");
    }
}

std::uint64_t IniFile::get_u64(const std::string& key, std::uint64_t def) const {
    std::int64_t v = get_int(key, static_cast<std::int64_t>(def));
    if (v < 0) throw ConfigError("config key '" + key + "': must be non-negative");
    return static_cast<std::uint64_t>(v);
}

double IniFile::get_double(const std::string& key, double def) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + it->second + "'");
    }
}

bool IniFile::get_bool(const std::string& key, bool def) const {
    touched_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}

std::vector<std::string> IniFile::get_list(const std::string& key) const {
    touched_[key] = true;
    std::vector<std::string> out;
    auto it = values_.find(key);
    if (it == values_.end()) return out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = [&] {
            size_t b = 0, e = item.size();
            while (b < e && std::isspace(static_cast<unsigned char>(item[b]))) ++b;
            while (e > b && std::isspace(static_cast<unsigned char>(item[e - 1]))) --e;
            return item.substr(b, e - b);
        }();
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> IniFile::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!touched_.count(k)) out.push_back(k);
    return out;
}

}  // namespace rngsim
