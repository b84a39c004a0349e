#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "../core/clock.hpp"
#include "../core/config.hpp"
#include "../core/rng.hpp"
#include "../core/run_result.hpp"

namespace tipping::mark0 {

struct Mark0Firm {
    double price = 1;
    double wage = 1;
    double production = 0;
    double demand = 0;
    double deposits = 0;
    bool active = true;
    double last_profit = 0;
};

struct HouseholdAggregate {
    double savings = 0;
    double budget = 0;
    double income = 0;
};

struct Mark0State {
    std::vector<Mark0Firm> firms;
    HouseholdAggregate household;
    std::int64_t t = 0;
    double p_bar = 1;
    double w_bar = 1;
    double u = 0;
    double theta_effective = kInf;
    std::vector<double> workforce;    // mu * u~_i, refreshed each step
    std::vector<std::size_t> healthy; // built by settle_accounts
    int bankruptcies = 0;
};

// Money audit: S + sum_i E_i.
inline double audit_money(const Mark0State& s) {
    double m = s.household.savings;
    for (const auto& f : s.firms) m += f.deposits;
    return m;
}

// k = E^- / (S + E^+). Returns 0 when the denominator is not positive.
inline double leverage(const Mark0State& s, bool* degenerate = nullptr) {
    double ep = 0, em = 0;
    for (const auto& f : s.firms) {
        if (f.deposits > 0) ep += f.deposits;
        else em -= f.deposits;
    }
    const double den = s.household.savings + ep;
    if (!(den > 0)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return em / den;
}

inline std::size_t count_active(const Mark0State& s) {
    std::size_t n = 0;
    for (const auto& f : s.firms) n += f.active;
    return n;
}

// u, and production-weighted p_bar and w_bar. When nothing is produced the
// averages keep their previous values.
inline void refresh_aggregates(Mark0State& s, const SimConfig& cfg, bool wages = true) {
    double y = 0, py = 0, wy = 0;
    for (const auto& f : s.firms) {
        y += f.production;
        py += f.price * f.production;
        wy += f.wage * f.production;
    }
    s.u = 1.0 - y / (cfg.mu * static_cast<double>(cfg.n_firms));
    if (s.u < 0) s.u = 0;  // guards rounding only; production never exceeds mu*N_F
    if (y > 0) {
        s.p_bar = py / y;
        if (wages) s.w_bar = wy / y;
    }
}

// mu*u~_i = exp(beta W_i / w_bar) / sum_active exp(beta W_j / w_bar) * mu N_F u.
inline const std::vector<double>& allocate_labor(Mark0State& s, const SimConfig& cfg) {
    const std::size_t n = s.firms.size();
    s.workforce.assign(n, 0.0);
    double z = 0, wmax = -kInf;
    for (const auto& f : s.firms)
        if (f.active) wmax = std::max(wmax, cfg.beta * f.wage / s.w_bar);
    for (std::size_t i = 0; i < n; ++i)
        if (s.firms[i].active) {
            s.workforce[i] = std::exp(cfg.beta * s.firms[i].wage / s.w_bar - wmax);
            z += s.workforce[i];
        }
    if (z <= 0) return s.workforce;
    const double pool = cfg.mu * static_cast<double>(cfg.n_firms) * s.u;
    for (auto& w : s.workforce) w = w / z * pool;
    return s.workforce;
}

// Random draws, per active firm in index order: one xi' if the wage changes,
// then one xi if the price changes.
inline void update_firms(Mark0State& s, const SimConfig& cfg, RngStream& rng) {
    const double eps = 1.0 - s.u;
    for (std::size_t i = 0; i < s.firms.size(); ++i) {
        Mark0Firm& f = s.firms[i];
        if (!f.active) continue;
        const double Y = f.production, D = f.demand;
        if (Y < D) {
            if (cfg.gamma_w > 0 && f.last_profit > 0) {
                f.wage *= 1.0 + cfg.gamma_w * eps * rng.uniform();
                if (Y > 0) f.wage = std::min(f.wage, f.price * std::min(D, Y) / Y);
            }
            f.production = Y + std::min(cfg.eta_plus * (D - Y), s.workforce[i]);
            if (f.price < s.p_bar) f.price *= 1.0 + cfg.gamma_p * rng.uniform();
        } else if (Y > D) {
            if (cfg.gamma_w > 0 && f.last_profit < 0) f.wage *= 1.0 - cfg.gamma_w * s.u * rng.uniform();
            f.production = std::max(0.0, Y - cfg.eta_minus * (Y - D));
            if (f.price > s.p_bar) f.price *= 1.0 - cfg.gamma_p * rng.uniform();
        }
    }
}

// D_i = (C_B / p_i) e^{-beta p_i / p_bar} / Z over active firms. Returns false
// when no firm is active.
inline bool allocate_demand(Mark0State& s, const SimConfig& cfg) {
    double z = 0, amax = -kInf;
    bool any = false;
    for (const auto& f : s.firms)
        if (f.active) {
            amax = std::max(amax, -cfg.beta * f.price / s.p_bar);
            any = true;
        }
    for (auto& f : s.firms) f.demand = 0;
    if (!any) return false;
    for (auto& f : s.firms)
        if (f.active) {
            f.demand = std::exp(-cfg.beta * f.price / s.p_bar - amax);
            z += f.demand;
        }
    for (auto& f : s.firms)
        if (f.active) f.demand = s.household.budget * f.demand / (z * f.price);
    return true;
}

inline void set_budget(Mark0State& s, const SimConfig& cfg) {
    double wages = 0;
    for (const auto& f : s.firms)
        if (f.active) wages += f.wage * f.production;
    s.household.income = wages;
    s.household.budget = cfg.c * (std::max(s.household.savings, 0.0) + wages);
}

inline void settle_accounts(Mark0State& s, const SimConfig& cfg) {
    s.healthy.clear();
    auto& S = s.household.savings;
    for (std::size_t i = 0; i < s.firms.size(); ++i) {
        Mark0Firm& f = s.firms[i];
        if (!f.active) continue;
        const double profit = f.price * std::min(f.production, f.demand) - f.wage * f.production;
        f.last_profit = profit;
        S -= profit;
        f.deposits += profit;
        if (cfg.delta_plus) {
            if (f.deposits > 0) {
                const double div = *cfg.delta_plus * f.deposits;
                S += div;
                f.deposits -= div;
            }
        } else if (profit > 0 && f.deposits > 0) {
            S += cfg.delta * profit;
            f.deposits -= cfg.delta * profit;
        }
        if (!std::isinf(s.theta_effective) && f.deposits > s.theta_effective * f.wage * f.production)
            s.healthy.push_back(i);
    }
}

// Returns the accumulated bankruptcy deficit. Draws per over-threshold firm:
// a partner index (only if the healthy set is non-empty), then one coin.
inline double resolve_defaults(Mark0State& s, const SimConfig& cfg, RngStream& rng) {
    s.bankruptcies = 0;
    const double theta = s.theta_effective;
    if (std::isinf(theta)) return 0.0;
    double deficit = 0;
    for (auto& f : s.firms) {
        if (!f.active || !(f.deposits < -theta * f.production * f.wage)) continue;
        Mark0Firm* partner = s.healthy.empty() ? nullptr : &s.firms[s.healthy[rng.index(s.healthy.size())]];
        const double coin = rng.uniform();
        if (partner && coin < 1.0 - cfg.f && partner->deposits > -f.deposits) {
            partner->deposits += f.deposits;
            f.deposits = 0;
            f.price = partner->price;
            f.wage = partner->wage;
        } else {
            deficit -= f.deposits;
            f.active = false;
            f.production = 0;
            f.deposits = 0;
            ++s.bankruptcies;
        }
    }
    return deficit;
}

// Draws: per inactive firm in index order, one revival coin and, on revival
// with revival_random, one xi for the restart production.
inline void revive_and_redistribute(Mark0State& s, const SimConfig& cfg, RngStream& rng, double deficit) {
    double avg_wage = s.w_bar;
    if (cfg.gamma_w > 0) {
        double y = 0, wy = 0;
        for (const auto& f : s.firms)
            if (f.active) {
                y += f.production;
                wy += f.wage * f.production;
            }
        if (y > 0) avg_wage = wy / y;
    }
    double e_plus = 0;
    for (auto& f : s.firms) {
        if (!f.active && rng.uniform() < cfg.phi) {
            f.active = true;
            f.price = s.p_bar;
            f.production = cfg.mu * s.u * (cfg.revival_random ? rng.uniform() : 1.0);
            if (cfg.gamma_w > 0) f.wage = avg_wage;
            f.deposits = f.wage * f.production;
            f.demand = 0;
            f.last_profit = 0;
            deficit += f.deposits;
        }
        if (f.active && f.deposits > 0) e_plus += f.deposits;
    }
    auto& S = s.household.savings;
    if (deficit > S) {
        deficit -= S;
        S = 0;
        if (e_plus > 0) {
            for (auto& f : s.firms)
                if (f.active && f.deposits > 0) f.deposits -= f.deposits / e_plus * deficit;
        } else {
            S = -deficit;  // nothing left to charge; keeps the books closed
        }
    } else {
        S -= deficit;
    }
}

inline Mark0State init_mark0(const SimConfig& cfg, RngStream& rng) {
    validate(cfg, Engine::mark0);
    Mark0State s;
    s.firms.resize(cfg.n_firms);
    double e = 0;
    for (auto& f : s.firms) {
        f.wage = 1;
        f.price = 1 + 0.2 * (rng.uniform() - 0.5);
        f.production = cfg.mu * (1 + 0.2 * (rng.uniform() - 0.5)) / 2;
        f.deposits = f.wage * f.production * 2 * rng.uniform();
        f.active = true;
        e += f.deposits;
    }
    s.household.savings = static_cast<double>(cfg.n_firms) - e;
    s.theta_effective = cfg.theta;
    refresh_aggregates(s, cfg);
    // Demand for the first firm update: the household allocation the initial
    // state would produce.
    set_budget(s, cfg);
    allocate_demand(s, cfg);
    return s;
}

inline double effective_theta(const Mark0State& s, const SimConfig& cfg) {
    if (cfg.policy && s.u > cfg.policy->u_trigger) return cfg.policy->theta_high;
    return cfg.theta;
}

// One full step. Returns false if the economy collapsed (no active firm left
// to receive demand); the state is then left as it was at the point of collapse.
inline bool step_mark0(Mark0State& s, const SimConfig& cfg, RngStream& rng) {
    refresh_aggregates(s, cfg);
    s.theta_effective = effective_theta(s, cfg);
    allocate_labor(s, cfg);
    update_firms(s, cfg, rng);
    refresh_aggregates(s, cfg, false);
    set_budget(s, cfg);
    if (!allocate_demand(s, cfg)) {
        s.bankruptcies = 0;
        return false;
    }
    settle_accounts(s, cfg);
    const double deficit = resolve_defaults(s, cfg, rng);
    revive_and_redistribute(s, cfg, rng, deficit);
    ++s.t;
    return true;
}

inline StepRecord observe(Mark0State& s, const SimConfig& cfg, double prev_p_bar, bool* degenerate = nullptr) {
    refresh_aggregates(s, cfg);
    StepRecord r;
    r.t = s.t;
    r.u = s.u;
    r.p_bar = s.p_bar;
    r.w_bar = s.w_bar;
    r.savings = s.household.savings;
    r.leverage = leverage(s, degenerate);
    r.bankruptcies = s.bankruptcies;
    r.active = count_active(s);
    r.inflation = std::log(s.p_bar) - std::log(prev_p_bar);
    return r;
}

template <class Observer>
RunResult run_mark0(const SimConfig& cfg, Observer&& on_step) {
    validate(cfg, Engine::mark0);
    RunResult out;
    out.manifest.engine = Engine::mark0;
    out.manifest.config = cfg;
    out.manifest.seed = cfg.seed;
    out.manifest.start_time = utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();

    RngStream rng(cfg.seed);
    Mark0State s = init_mark0(cfg, rng);
    out.series.reserve(static_cast<std::size_t>(cfg.horizon));
    double prev = s.p_bar;
    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        if (!step_mark0(s, cfg, rng)) {
            out.manifest.termination = Termination::collapsed;
            break;
        }
        bool degenerate = false;
        out.series.push_back(observe(s, cfg, prev, &degenerate));
        out.manifest.degenerate_leverage |= degenerate;
        prev = s.p_bar;
        on_step(s, out.series.back());
    }
    out.manifest.end_time = utc_timestamp();
    out.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline RunResult run_mark0(const SimConfig& cfg) {
    return run_mark0(cfg, [](const Mark0State&, const StepRecord&) {});
}

}  // namespace tipping::mark0
