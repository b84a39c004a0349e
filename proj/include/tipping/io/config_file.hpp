#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "../core/config.hpp"

namespace tipping::io {

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

inline std::string trim(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

// `key = value` per line; `#` starts a comment; blank lines are skipped.
inline std::vector<KeyValue> parse_key_values(const std::string& text, const std::string& origin = "<config>") {
    std::vector<KeyValue> out;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(n) + ": expected 'key = value', got '" + t + "'");
        KeyValue kv{trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)), n};
        if (kv.key.empty()) throw ConfigError(origin + ":" + std::to_string(n) + ": missing key");
        if (!seen.insert(kv.key).second) throw ConfigError(origin + ":" + std::to_string(n) + ": duplicate key '" + kv.key + "'");
        out.push_back(std::move(kv));
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Applies one key to cfg. Keys the engine does not use are still stored but
// reported through `notices`.
inline void apply_config_key(SimConfig& cfg, Engine engine, const KeyValue& kv, const std::string& origin,
                             std::vector<std::string>* notices) {
    const ConfigField* f = find_field(kv.key);
    if (!f) throw ConfigError(origin + ":" + std::to_string(kv.line) + ": unknown config key '" + kv.key + "'");
    f->set(cfg, kv.value);
    const bool relevant = engine == Engine::mark0 ? f->mark0 : f->mark1;
    if (!relevant && notices)
        notices->push_back("notice: key '" + kv.key + "' is not used by " + std::string(to_string(engine)) + " and is ignored");
}

// Starts from the engine defaults, applies the file, then validates.
inline SimConfig parse_config(const std::string& text, Engine engine, std::vector<std::string>* notices = nullptr,
                              const std::string& origin = "<config>") {
    SimConfig cfg = default_config(engine);
    for (const auto& kv : parse_key_values(text, origin)) apply_config_key(cfg, engine, kv, origin, notices);
    validate(cfg, engine);
    return cfg;
}

inline SimConfig load_config(const std::string& path, Engine engine, std::vector<std::string>* notices = nullptr) {
    return parse_config(read_file(path), engine, notices, path);
}

}  // namespace tipping::io
