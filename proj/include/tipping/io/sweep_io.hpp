#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <vector>

#include "../sweep/sweep.hpp"
#include "config_file.hpp"
#include "manifest.hpp"

namespace tipping::io {

// Axis value list: "a, b, c", "linspace(a, b, n)" or "logspace(a, b, n)".
inline std::vector<double> parse_axis_values(const std::string& key, const std::string& text) {
    static const std::regex fn(R"(^\s*(linspace|logspace)\s*\(\s*([^,]+?)\s*,\s*([^,]+?)\s*,\s*([0-9]+)\s*\)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, fn)) {
        const double a = detail::parse_double(key, m[2].str()), b = detail::parse_double(key, m[3].str());
        const auto n = detail::parse_int<std::size_t>(key, m[4].str());
        return m[1] == "linspace" ? sweep::linspace(a, b, n) : sweep::logspace(a, b, n);
    }
    std::vector<double> v;
    std::string cell;
    std::istringstream ss(text);
    while (std::getline(ss, cell, ',')) {
        const std::string t = trim(cell);
        if (t.empty()) throw ConfigError(key + ": empty value in list");
        v.push_back(detail::parse_double(key, t));
    }
    if (v.empty()) throw ConfigError(key + ": no values");
    return v;
}

inline void set_threshold(analytics::ClassifyThresholds& th, const std::string& name, const std::string& value) {
    const std::string key = "classify." + name;
    if (name == "fu_mean") th.fu_mean = detail::parse_double(key, value);
    else if (name == "fe_mean") th.fe_mean = detail::parse_double(key, value);
    else if (name == "ec_amplitude") th.ec_amplitude = detail::parse_double(key, value);
    else if (name == "excursion") th.excursion = detail::parse_double(key, value);
    else if (name == "rearm") th.rearm = detail::parse_double(key, value);
    else if (name == "min_excursions") th.min_excursions = detail::parse_int<int>(key, value);
    else if (name == "min_window") th.min_window = detail::parse_int<std::size_t>(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

inline nlohmann::ordered_json thresholds_to_json(const analytics::ClassifyThresholds& th) {
    nlohmann::ordered_json j;
    j["fu_mean"] = th.fu_mean;
    j["fe_mean"] = th.fe_mean;
    j["ec_amplitude"] = th.ec_amplitude;
    j["excursion"] = th.excursion;
    j["rearm"] = th.rearm;
    j["min_excursions"] = th.min_excursions;
    j["min_window"] = th.min_window;
    return j;
}

// Sweep spec files use the config grammar plus these keys:
//   engine = mark0 | mark1
//   axis1 = <name>: <values>      (required)
//   axis2 = <name>: <values>      (optional)
//   seeds_per_cell, master_seed, r_mode = eta_plus | eta_minus,
//   classify.<threshold>
// Every other key sets the base SimConfig, on top of the engine defaults.
inline sweep::SweepSpec parse_sweep_spec(const std::string& text, std::vector<std::string>* notices = nullptr,
                                         const std::string& origin = "<spec>") {
    const auto kvs = parse_key_values(text, origin);
    sweep::SweepSpec spec;
    for (const auto& kv : kvs)
        if (kv.key == "engine") spec.engine = engine_from_string(kv.value);
    spec.base = default_config(spec.engine);
    std::vector<sweep::SweepAxis> axes(2);
    for (const auto& kv : kvs) {
        if (kv.key == "engine") continue;
        if (kv.key == "axis1" || kv.key == "axis2") {
            const auto colon = kv.value.find(':');
            if (colon == std::string::npos) throw ConfigError(origin + ":" + std::to_string(kv.line) + ": expected '" + kv.key + " = name: values'");
            auto& ax = axes[kv.key == "axis1" ? 0 : 1];
            ax.name = trim(std::string_view(kv.value).substr(0, colon));
            ax.values = parse_axis_values(kv.key, kv.value.substr(colon + 1));
        } else if (kv.key == "seeds_per_cell") {
            spec.seeds_per_cell = detail::parse_int<int>(kv.key, kv.value);
        } else if (kv.key == "master_seed") {
            spec.master_seed = detail::parse_int<std::uint64_t>(kv.key, kv.value);
        } else if (kv.key == "r_mode") {
            if (kv.value == "eta_plus") spec.r_mode = sweep::RMode::eta_plus;
            else if (kv.value == "eta_minus") spec.r_mode = sweep::RMode::eta_minus;
            else throw ConfigError(origin + ":" + std::to_string(kv.line) + ": r_mode must be eta_plus or eta_minus");
        } else if (kv.key.rfind("classify.", 0) == 0) {
            set_threshold(spec.thresholds, kv.key.substr(9), kv.value);
        } else {
            apply_config_key(spec.base, spec.engine, kv, origin, notices);
        }
    }
    if (axes[0].name.empty()) throw ConfigError(origin + ": axis1 is required");
    spec.axes.push_back(axes[0]);
    if (!axes[1].name.empty()) spec.axes.push_back(axes[1]);
    validate(spec.base, spec.engine);
    sweep::validate_spec(spec);
    return spec;
}

inline sweep::SweepSpec load_sweep_spec(const std::string& path, std::vector<std::string>* notices = nullptr) {
    return parse_sweep_spec(read_file(path), notices, path);
}

inline std::string label_or_na(const std::optional<analytics::PhaseLabel>& l) { return l ? analytics::to_string(*l) : "NA"; }

inline void write_phasemap_csv(std::ostream& os, const sweep::PhaseMap& map) {
    using detail::fmt_double;
    os << "axis1,axis2,label,mean_u,amplitude,n_ok\n";
    for (const auto& c : map.cells) {
        os << fmt_double(c.x) << ',' << (map.y_values.empty() ? "" : fmt_double(c.y)) << ',' << label_or_na(c.label) << ','
           << fmt_double(c.mean_u) << ',' << fmt_double(c.amplitude) << ',' << c.n_ok << '\n';
    }
}

inline nlohmann::ordered_json cell_manifest(const sweep::SweepSpec& spec, const sweep::PhaseMap& map, const sweep::Cell& c) {
    nlohmann::ordered_json j;
    j["engine"] = std::string(to_string(spec.engine));
    j["code_version"] = kCodeVersion;
    j["master_seed"] = std::to_string(spec.master_seed);
    j["axes"] = map.axis_names;
    j["point"] = map.y_values.empty() ? nlohmann::ordered_json::array({c.x}) : nlohmann::ordered_json::array({c.x, c.y});
    j["index"] = {c.i, c.j};
    j["label"] = label_or_na(c.label);
    j["mean_u"] = c.mean_u;
    j["amplitude"] = c.amplitude;
    j["n_ok"] = c.n_ok;
    j["thresholds"] = thresholds_to_json(spec.thresholds);
    j["config"] = config_to_json(c.config);
    auto runs = nlohmann::ordered_json::array();
    for (const auto& r : c.runs) {
        nlohmann::ordered_json o;
        o["seed"] = std::to_string(r.seed);
        o["label"] = label_or_na(r.label);
        o["mean_u"] = r.mean_u;
        o["amplitude"] = r.amplitude;
        o["final_u"] = r.final_u;
        o["collapsed"] = r.collapsed;
        if (!r.error.empty()) o["error"] = r.error;
        runs.push_back(o);
    }
    j["runs"] = runs;
    return j;
}

// <dir>/phasemap.csv plus <dir>/cells/cell_<i>_<j>.json.
inline void write_sweep(const std::filesystem::path& dir, const sweep::SweepSpec& spec, const sweep::PhaseMap& map) {
    std::filesystem::create_directories(dir / "cells");
    {
        std::ofstream f(dir / "phasemap.csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / "phasemap.csv").string());
        write_phasemap_csv(f, map);
    }
    for (const auto& c : map.cells) {
        const auto p = dir / "cells" / ("cell_" + std::to_string(c.i) + "_" + std::to_string(c.j) + ".json");
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + p.string());
        f << cell_manifest(spec, map, c).dump(2) << '\n';
    }
}

}  // namespace tipping::io
