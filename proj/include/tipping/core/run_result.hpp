#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "config.hpp"

namespace tipping {

inline constexpr const char* kCodeVersion = "tipping-abm 1.0.0";

struct StepRecord {
    std::int64_t t = 0;
    double u = 0;
    double p_bar = 0;
    double w_bar = 0;
    double savings = 0;
    double leverage = 0;
    int bankruptcies = 0;
    std::size_t active = 0;
    double inflation = 0;
    // Mark I+ only.
    double r_measured = 0;
    double mean_rate = 0;
};

enum class Termination { completed, collapsed };

inline const char* to_string(Termination t) { return t == Termination::completed ? "completed" : "collapsed"; }

struct RunManifest {
    Engine engine = Engine::mark0;
    SimConfig config;
    std::uint64_t seed = 0;
    std::string code_version = kCodeVersion;
    std::string start_time;
    std::string end_time;
    double wall_seconds = 0;
    Termination termination = Termination::completed;
    bool degenerate_leverage = false;
};

struct RunResult {
    std::vector<StepRecord> series;
    RunManifest manifest;

    std::vector<double> u_series() const {
        std::vector<double> u;
        u.reserve(series.size());
        for (const auto& r : series) u.push_back(r.u);
        return u;
    }

    bool truncated() const { return manifest.termination != Termination::completed; }
};

}  // namespace tipping
