#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "nilmevt/synth.hpp"
#include "nilmevt/types.hpp"

namespace nilmevt {

/// Minimal TOML subset: bare keys, numbers, booleans, quoted strings,
/// one-line arrays, [table] and [[array-of-table]] headers, # comments.
struct TomlValue {
    std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>> v;

    double number() const { return std::get<double>(v); }
    bool boolean() const { return std::get<bool>(v); }
    const std::string& str() const { return std::get<std::string>(v); }
    const std::vector<double>& numbers() const { return std::get<std::vector<double>>(v); }
};

struct TomlTable {
    std::map<std::string, TomlValue> values;

    bool has(const std::string& k) const { return values.count(k) > 0; }
    double number(const std::string& k, double fallback) const;
    std::string str(const std::string& k, const std::string& fallback) const;
};

struct TomlDocument {
    TomlTable root;
    std::map<std::string, std::vector<TomlTable>> table_arrays;
};

TomlDocument parse_toml(const std::string& text);
TomlDocument parse_toml_file(const std::string& path);

/// Flat key/value file matching DetectionConfig field names; missing keys
/// keep their defaults.
DetectionConfig load_detection_config(const std::string& path);
DetectionConfig detection_config_from_toml(const TomlDocument& doc);

SynthSpec load_synth_spec(const std::string& path);

}  // namespace nilmevt
