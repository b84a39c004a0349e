#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "../core/rng.hpp"
#include "engine.hpp"

namespace tipping::mark1 {

struct RateRun {
    double mean_u = 0;      // post-burn-in mean; 1 for a run that collapsed
    double r_measured = 1;  // from the final row; 0 for a collapsed run
    bool collapsed = false;
    std::vector<double> u;  // kept only when requested
};

struct RatePoint {
    double rho0 = 0;
    std::vector<RateRun> runs;
    double mean_u = 0;  // average over seeds
};

struct TransitionResult {
    std::vector<double> rho0;
    std::vector<double> mean_u;
    std::optional<double> rho_c;  // smallest grid rate with mean u above the level
    bool censored() const { return !rho_c.has_value(); }
};

inline TransitionResult find_transition(const std::vector<double>& rho0, const std::vector<double>& mean_u, double level = 0.8) {
    if (rho0.size() != mean_u.size()) throw std::invalid_argument("find_transition: grid and curve differ in length");
    if (!std::is_sorted(rho0.begin(), rho0.end())) throw std::invalid_argument("find_transition: rate grid must be increasing");
    TransitionResult t{rho0, mean_u, std::nullopt};
    for (std::size_t i = 0; i < rho0.size(); ++i)
        if (mean_u[i] > level) {
            t.rho_c = rho0[i];
            break;
        }
    return t;
}

inline RateRun summarize_rate_run(const RunResult& r, std::int64_t burn_in, bool keep_series) {
    RateRun out;
    out.collapsed = r.truncated();
    if (keep_series) out.u = r.u_series();
    if (out.collapsed || r.series.empty()) {
        out.mean_u = 1.0;
        out.r_measured = 0.0;
        out.collapsed = true;
        return out;
    }
    const std::size_t from = std::min(static_cast<std::size_t>(std::max<std::int64_t>(0, burn_in)), r.series.size() - 1);
    double s = 0;
    for (std::size_t i = from; i < r.series.size(); ++i) s += r.series[i].u;
    out.mean_u = s / static_cast<double>(r.series.size() - from);
    out.r_measured = r.series.back().r_measured;
    return out;
}

// Runs `seeds` Mark I+ simulations per grid rate. The seed of run (i, k) is
// derive_run_seed(master_seed, {i, k}), so results do not depend on `workers`.
inline std::vector<RatePoint> scan_rates(const SimConfig& base, const std::vector<double>& rho0, int seeds, std::uint64_t master_seed,
                                         unsigned workers = 1, bool keep_series = false) {
    if (seeds < 1) throw std::invalid_argument("scan_rates: seeds must be >= 1");
    std::vector<RatePoint> pts(rho0.size());
    for (std::size_t i = 0; i < rho0.size(); ++i) {
        pts[i].rho0 = rho0[i];
        pts[i].runs.resize(static_cast<std::size_t>(seeds));
    }
    const std::size_t n_tasks = rho0.size() * static_cast<std::size_t>(seeds);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= n_tasks) return;
            const std::size_t i = t / static_cast<std::size_t>(seeds), k = t % static_cast<std::size_t>(seeds);
            SimConfig cfg = base;
            cfg.rho0 = rho0[i];
            cfg.seed = derive_run_seed(master_seed, {static_cast<std::int64_t>(i), static_cast<std::int64_t>(k)});
            pts[i].runs[k] = summarize_rate_run(run_mark1(cfg), cfg.burn_in, keep_series);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n_tasks))));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (auto& p : pts) {
        double s = 0;
        for (const auto& r : p.runs) s += r.mean_u;
        p.mean_u = s / static_cast<double>(p.runs.size());
    }
    return pts;
}

inline TransitionResult find_transition(const std::vector<RatePoint>& pts, double level = 0.8) {
    std::vector<double> x, y;
    for (const auto& p : pts) {
        x.push_back(p.rho0);
        y.push_back(p.mean_u);
    }
    return find_transition(x, y, level);
}

}  // namespace tipping::mark1
