#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "../core/config.hpp"
#include "../core/run_result.hpp"
#include "config_file.hpp"
#include "csv.hpp"

namespace tipping::io {

// Config values are stored as the same strings the config grammar accepts,
// so that "inf" and exact doubles survive the round trip.
inline nlohmann::ordered_json config_to_json(const SimConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& f : config_fields())
        if (auto v = f.get(cfg)) j[f.name] = *v;
    return j;
}

inline SimConfig config_from_json(const nlohmann::json& j) {
    SimConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string()) throw ConfigError("manifest config value for '" + key + "' must be a string");
        set_config_value(cfg, key, value.get<std::string>());
    }
    return cfg;
}

inline nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
    nlohmann::ordered_json j;
    j["engine"] = std::string(to_string(m.engine));
    j["seed"] = std::to_string(m.seed);
    j["code_version"] = m.code_version;
    j["start_time"] = m.start_time;
    j["end_time"] = m.end_time;
    j["wall_seconds"] = m.wall_seconds;
    j["termination"] = to_string(m.termination);
    j["degenerate_leverage"] = m.degenerate_leverage;
    j["config"] = config_to_json(m.config);
    return j;
}

struct ReplayInput {
    Engine engine = Engine::mark0;
    SimConfig config;
};

inline ReplayInput replay_input_from_json(const nlohmann::json& j) {
    ReplayInput r;
    r.engine = engine_from_string(j.at("engine").get<std::string>());
    r.config = config_from_json(j.at("config"));
    validate(r.config, r.engine);
    return r;
}

inline ReplayInput load_manifest(const std::string& path) {
    try {
        return replay_input_from_json(nlohmann::json::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed manifest '" + path + "': " + e.what());
    }
}

inline constexpr const char* kSeriesFile = "series.csv";
inline constexpr const char* kManifestFile = "manifest.json";

// Writes <dir>/series.csv and <dir>/manifest.json.
inline void write_run(const std::filesystem::path& dir, const RunResult& r) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / kSeriesFile, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / kSeriesFile).string());
        write_series_csv(f, r);
    }
    std::ofstream f(dir / kManifestFile, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / kManifestFile).string());
    f << manifest_to_json(r.manifest).dump(2) << '\n';
}

}  // namespace tipping::io
