#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace rngsim {

// Minimal INI-style reader: [section] headers, key = value pairs, '#' or ';'
// comments. Keys are stored flattened as "section.key".
class IniFile {
  public:
    IniFile() = default;

    static IniFile parse_file(const std::string& path);
    static IniFile parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get(const std::string& key, const std::string& def) const;
    std::int64_t get_int(const std::string& key, std::int64_t def) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
    double get_double(const std::string& key, double def) const;
    bool get_bool(const std::string& key, bool def) const;
    // comma-separated list value
    std::vector<std::string> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    const std::map<std::string, std::string>& values() const { return values_; }

    // keys actually read through one of the getters; used to flag typos
    std::vector<std::string> unused_keys() const;

  private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> touched_;
};

}  // namespace rngsim
