#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "../analytics/phase.hpp"
#include "../core/config.hpp"
#include "../core/rng.hpp"
#include "../run.hpp"

namespace tipping::sweep {

using analytics::PhaseLabel;

// How an "R" axis value is applied: vary eta_plus at fixed eta_minus, or
// eta_minus at fixed eta_plus.
enum class RMode { eta_plus, eta_minus };

struct SweepAxis {
    std::string name;  // a numeric SimConfig key, or "R" (eta_+/eta_-), or "z" (gamma_w/gamma_p)
    std::vector<double> values;
};

struct SweepSpec {
    Engine engine = Engine::mark0;
    SimConfig base;
    std::vector<SweepAxis> axes;
    int seeds_per_cell = 5;
    std::uint64_t master_seed = 1;
    RMode r_mode = RMode::eta_plus;
    analytics::ClassifyThresholds thresholds;
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    std::optional<PhaseLabel> label;  // empty when the run failed
    double mean_u = 0;
    double amplitude = 0;
    double final_u = 0;
    bool collapsed = false;
    std::string error;
};

struct Cell {
    std::size_t i = 0, j = 0;
    double x = 0, y = 0;  // axis values (y is 0 for a one-axis sweep)
    SimConfig config;     // cell configuration before the per-seed seed is set
    std::vector<SeedOutcome> runs;
    std::optional<PhaseLabel> label;  // majority over successful runs
    double mean_u = 0;
    double amplitude = 0;
    int n_ok = 0;
};

struct PhaseMap {
    std::vector<std::string> axis_names;
    std::vector<double> x_values, y_values;
    std::vector<Cell> cells;  // row-major in (i, j): index i * ny + j

    std::size_t nx() const { return x_values.size(); }
    std::size_t ny() const { return y_values.empty() ? 1 : y_values.size(); }
    const Cell& at(std::size_t i, std::size_t j = 0) const { return cells.at(i * ny() + j); }
};

inline bool is_derived_axis(const std::string& name) { return name == "R" || name == "z"; }

inline void validate_spec(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) throw ConfigError("sweep: need one or two axes");
    if (spec.seeds_per_cell < 1) throw ConfigError("sweep: seeds_per_cell must be >= 1");
    for (const auto& a : spec.axes) {
        if (a.values.empty()) throw ConfigError("sweep: axis '" + a.name + "' has no values");
        if (!is_derived_axis(a.name)) {
            const ConfigField* f = find_field(a.name);
            if (!f) throw ConfigError("sweep: unknown axis parameter '" + a.name + "'");
            if (a.name == "delta_plus" || a.name == "revival_random" || a.name == "rate_noise")
                throw ConfigError("sweep: axis parameter '" + a.name + "' is not numeric");
        }
        if (a.name == "R" && spec.r_mode == RMode::eta_plus && !(spec.base.eta_minus > 0))
            throw ConfigError("sweep: an R axis requires eta_minus > 0");
        if (a.name == "R")
            for (double v : a.values)
                if (!(v > 0)) throw ConfigError("sweep: R values must be positive");
    }
    if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) throw ConfigError("sweep: axes must differ");
}

// Applies plain keys first so that R and z see the final eta/gamma_p.
inline SimConfig cell_config(const SweepSpec& spec, const std::vector<double>& point) {
    SimConfig c = spec.base;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            const std::string& name = spec.axes[a].name;
            const double v = point[a];
            if (is_derived_axis(name) != (pass == 1)) continue;
            if (name == "R") {
                if (spec.r_mode == RMode::eta_plus) c.eta_plus = v * c.eta_minus;
                else c.eta_minus = c.eta_plus / v;
            } else if (name == "z") {
                c.gamma_w = v * c.gamma_p;
            } else {
                set_config_value(c, name, detail::fmt_double(v));
            }
        }
    }
    validate(c, spec.engine);
    return c;
}

// Majority label; ties go to the label that comes first in FU, RU, EC, FE.
inline std::optional<PhaseLabel> majority(const std::vector<SeedOutcome>& runs) {
    std::array<int, 4> count{};
    for (const auto& r : runs)
        if (r.label) ++count[static_cast<std::size_t>(*r.label)];
    const auto it = std::max_element(count.begin(), count.end());
    if (*it == 0) return std::nullopt;
    return static_cast<PhaseLabel>(it - count.begin());
}

inline SeedOutcome run_one(const SweepSpec& spec, SimConfig cfg, std::uint64_t seed) {
    SeedOutcome out;
    out.seed = seed;
    cfg.seed = seed;
    try {
        const RunResult r = run_engine(spec.engine, cfg);
        const auto u = r.u_series();
        out.final_u = u.empty() ? 1.0 : u.back();
        out.collapsed = r.truncated();
        if (out.collapsed && out.final_u < spec.thresholds.fu_mean) {
            out.error = "collapsed with final u below the FU cutoff";
            return out;
        }
        if (out.collapsed) {
            out.label = PhaseLabel::FU;
            double s = 0;
            for (double v : u) s += v;
            out.mean_u = u.empty() ? 1.0 : s / static_cast<double>(u.size());
            return out;
        }
        const auto st = analytics::classify_phase(u, static_cast<std::size_t>(cfg.burn_in), spec.thresholds);
        out.label = st.label;
        out.mean_u = st.mean_u;
        out.amplitude = st.amplitude;
    } catch (const std::exception& e) {
        out.label.reset();
        out.error = e.what();
    }
    return out;
}

inline unsigned default_workers() {
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

// Runs every cell x seed on a pool of `workers` threads. Results are stored by
// task index, so the map does not depend on scheduling or worker count.
inline PhaseMap run_sweep(const SweepSpec& spec, unsigned workers = 1) {
    validate_spec(spec);
    PhaseMap map;
    for (const auto& a : spec.axes) map.axis_names.push_back(a.name);
    map.x_values = spec.axes[0].values;
    if (spec.axes.size() == 2) map.y_values = spec.axes[1].values;

    const std::size_t nx = map.nx(), ny = map.ny();
    const auto seeds = static_cast<std::size_t>(spec.seeds_per_cell);
    map.cells.resize(nx * ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            Cell& c = map.cells[i * ny + j];
            c.i = i;
            c.j = j;
            c.x = map.x_values[i];
            c.y = map.y_values.empty() ? 0.0 : map.y_values[j];
            std::vector<double> point{c.x};
            if (!map.y_values.empty()) point.push_back(c.y);
            c.config = cell_config(spec, point);
            c.runs.resize(seeds);
        }

    const std::size_t n_tasks = map.cells.size() * seeds;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= n_tasks) return;
            Cell& c = map.cells[t / seeds];
            const std::size_t k = t % seeds;
            const std::uint64_t seed = derive_run_seed(
                spec.master_seed, {static_cast<std::int64_t>(c.i), static_cast<std::int64_t>(c.j), static_cast<std::int64_t>(k)});
            c.runs[k] = run_one(spec, c.config, seed);
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, n_tasks))));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }

    for (Cell& c : map.cells) {
        c.label = majority(c.runs);
        double su = 0, sa = 0;
        for (const auto& r : c.runs)
            if (r.label) {
                ++c.n_ok;
                su += r.mean_u;
                sa += r.amplitude;
            }
        if (c.n_ok > 0) {
            c.mean_u = su / c.n_ok;
            c.amplitude = sa / c.n_ok;
        }
    }
    return map;
}

struct BoundaryPoint {
    double y = 0;                 // second-axis value of the row
    std::optional<double> x;      // first-axis location of the flip (midpoint of the two cells)
    bool censored() const { return !x.has_value(); }
};

// For each row of the second axis, the first place along the first axis where
// the majority label changes from `from` to `to` between neighbouring cells.
inline std::vector<BoundaryPoint> boundary_trace(const PhaseMap& map, PhaseLabel from, PhaseLabel to) {
    std::vector<BoundaryPoint> out;
    for (std::size_t j = 0; j < map.ny(); ++j) {
        BoundaryPoint b;
        b.y = map.y_values.empty() ? 0.0 : map.y_values[j];
        for (std::size_t i = 1; i < map.nx(); ++i) {
            const auto& l0 = map.at(i - 1, j).label;
            const auto& l1 = map.at(i, j).label;
            if (l0 == from && l1 == to) {
                b.x = 0.5 * (map.x_values[i - 1] + map.x_values[i]);
                break;
            }
        }
        out.push_back(b);
    }
    return out;
}

// Location where a monotone curve y(x) first crosses `level`, by linear
// interpolation between grid points; empty if it never does.
inline std::optional<double> find_crossing(const std::vector<double>& x, const std::vector<double>& y, double level) {
    if (x.size() != y.size()) throw std::invalid_argument("find_crossing: size mismatch");
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = y[i - 1] - level, b = y[i] - level;
        if (a == 0) return x[i - 1];
        if ((a < 0) != (b < 0) || b == 0) return x[i - 1] + (x[i] - x[i - 1]) * a / (a - b);
    }
    return std::nullopt;
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {a};
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return v;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
    if (!(a > 0 && b > 0)) throw std::invalid_argument("logspace: bounds must be positive");
    auto v = linspace(std::log(a), std::log(b), n);
    for (double& x : v) x = std::exp(x);
    return v;
}

}  // namespace tipping::sweep
