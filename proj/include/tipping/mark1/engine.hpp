#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <vector>

#include "../core/clock.hpp"
#include "../core/config.hpp"
#include "../core/rng.hpp"
#include "../core/run_result.hpp"

namespace tipping::mark1 {

inline constexpr double kWage = 1.0;
inline constexpr double kAlpha = 1.0;
inline constexpr int kYoungAge = 100;

struct Mark1Firm {
    double price = 1;
    double production = 1;
    double target_production = 1;
    double demand = 1;
    double liquidity = 50;
    double total_debt = 0;
    double rate = 0;
    double interests = 0;
    long labor_demand = 0;
    long vacancies = 0;
    int age = 0;
    std::vector<std::uint32_t> employees;

    double stock() const { return production - demand; }
    double equity() const { return liquidity - total_debt; }
};

struct Mark1Household {
    double savings = 0;
    double wage = 0;
    std::int32_t employer = -1;

    bool working() const { return wage > 0; }
};

struct Bank {
    double liquidity = 0;
    double base_rate = 0;
};

// Hiring/firing intentions versus what survives the financial constraint:
// the target is ceil(Y^T/alpha) - staff from the strategy update, the realized
// value is the vacancy count after define_labor_demand (before the job market).
// Liquidity can only shrink L_d, so a planned firing always goes through and
// extra layoffs forced by finance are not counted as firing fulfillment.
struct AsymmetryProbe {
    // Current-step pooled accumulators.
    long target_hires = 0;
    long realized_hires = 0;
    long target_fires = 0;
    long realized_fires = 0;
    // Time averages of the per-step ratios.
    double hire_ratio_sum = 0;
    long hire_steps = 0;
    double fire_ratio_sum = 0;
    long fire_steps = 0;

    void begin_step() { target_hires = realized_hires = target_fires = realized_fires = 0; }

    void end_step() {
        if (target_hires > 0) {
            hire_ratio_sum += static_cast<double>(realized_hires) / static_cast<double>(target_hires);
            ++hire_steps;
        }
        if (target_fires > 0) {
            fire_ratio_sum += static_cast<double>(realized_fires) / static_cast<double>(target_fires);
            ++fire_steps;
        }
    }

    void reset() { *this = AsymmetryProbe{}; }
};

// R = <realized/target>_hire / <realized/target>_fire, time averages over the
// steps where the corresponding target was non-zero. Sides with no such step
// count as fully realized.
inline double measure_asymmetry(const AsymmetryProbe& p) {
    const double h = p.hire_steps ? p.hire_ratio_sum / static_cast<double>(p.hire_steps) : 1.0;
    const double f = p.fire_steps ? p.fire_ratio_sum / static_cast<double>(p.fire_steps) : 1.0;
    return f > 0 ? h / f : 0.0;
}

struct Mark1State {
    std::vector<Mark1Firm> firms;
    std::vector<Mark1Household> households;
    Mark1Household owner;
    Bank bank;
    double p_bar = 1;
    std::int64_t t = 0;
    double pending_bad_debt = 0;  // unspread remainder carried to the next step
    int bankruptcies = 0;
    AsymmetryProbe probe;
    std::vector<std::uint32_t> order;
};

// Credit contraction: full credit below 5%, none above 10%, linear in between.
inline double credit_fraction(double rho) {
    if (rho <= 0.05) return 1.0;
    if (rho >= 0.10) return 0.0;
    return (0.10 - rho) / 0.05;
}

inline double offer_rate(double base, double leverage) { return base * (1.0 + std::log1p(leverage)); }

// Conserved total: bank liquidity + sum of firm liquidity + all household
// savings including the owner, plus any bad debt not yet spread. Equivalent
// to bank equity (liquidity + loan book) + sum of firm equity + savings.
inline double audit_money(const Mark1State& s) {
    double m = s.bank.liquidity + s.owner.savings + s.pending_bad_debt;
    for (const auto& f : s.firms) m += f.liquidity;
    for (const auto& h : s.households) m += h.savings;
    return m;
}

inline Mark1State init_mark1(const SimConfig& cfg) {
    validate(cfg, Engine::mark1);
    Mark1State s;
    s.firms.resize(cfg.n_firms);
    for (auto& f : s.firms) f.liquidity = cfg.initial_liquidity;
    s.households.resize(cfg.n_firms * static_cast<std::size_t>(cfg.mu));
    s.bank.base_rate = cfg.rho0;
    s.order.resize(s.households.size());
    for (std::size_t i = 0; i < s.order.size(); ++i) s.order[i] = static_cast<std::uint32_t>(i);
    return s;
}

namespace detail {

inline void fire(Mark1State& s, Mark1Firm& f, std::size_t slot) {
    const std::uint32_t h = f.employees[slot];
    s.households[h].wage = 0;
    s.households[h].employer = -1;
    f.employees[slot] = f.employees.back();
    f.employees.pop_back();
    ++f.vacancies;
}

inline void hire(Mark1State& s, std::size_t fi, std::uint32_t h) {
    Mark1Firm& f = s.firms[fi];
    f.employees.push_back(h);
    s.households[h].wage = kWage;
    s.households[h].employer = static_cast<std::int32_t>(fi);
    --f.vacancies;
}

}  // namespace detail

// Draws, per firm in index order: one xi for the strategy update, then one xi'
// for the offered rate if rate_noise is on and the firm needs credit.
inline void plan_firms(Mark1State& s, const SimConfig& cfg, RngStream& rng) {
    for (std::size_t i = 0; i < s.firms.size(); ++i) {
        Mark1Firm& f = s.firms[i];
        ++f.age;
        const double xi = rng.uniform();
        if (f.production == f.demand) {
            if (f.price >= s.p_bar) f.target_production = f.production * (1 + cfg.gamma_y * xi);
            else f.price *= 1 + cfg.gamma_p * xi;
        } else {
            if (f.price >= s.p_bar) f.price *= 1 - cfg.gamma_p * xi;
            else f.target_production = f.production * (1 - cfg.gamma_y * xi);
        }
        f.target_production = std::max(f.target_production, kAlpha);
        f.labor_demand = static_cast<long>(std::ceil(f.target_production / kAlpha));

        const long staff = static_cast<long>(f.employees.size());
        const long gap = f.labor_demand - staff;
        if (gap > 0) s.probe.target_hires += gap;
        else s.probe.target_fires += -gap;

        const double need = kWage * static_cast<double>(f.labor_demand) - f.liquidity;
        if (need > 0) {
            const double lev = (f.total_debt + need) / (f.liquidity + 0.001);
            double rho = offer_rate(s.bank.base_rate, lev);
            if (cfg.rate_noise) rho *= 1 + rng.uniform();
            const double credit = need * credit_fraction(rho);
            if (credit > 0) {
                f.rate = rho;
                f.total_debt += credit;
                f.liquidity += credit;
                s.bank.liquidity -= credit;
            }
        }
        f.interests = f.rate * f.total_debt;
        // The small slack absorbs rounding in liquidity + (W L_d - liquidity).
        const long affordable = static_cast<long>(std::floor(f.liquidity / kWage + 1e-9));
        f.labor_demand = std::max(0L, std::min(f.labor_demand, affordable));
        f.vacancies = f.labor_demand - staff;
        if (gap > 0) s.probe.realized_hires += std::max(0L, f.vacancies);
        else if (gap < 0) s.probe.realized_fires += std::min(-gap, std::max(0L, -f.vacancies));
    }
}

// Draws: over-staffed firms in index order pick random employees to fire;
// then each match draws an unemployed household, then a hiring firm.
inline void job_market(Mark1State& s, RngStream& rng) {
    std::vector<std::size_t> hiring;
    for (std::size_t i = 0; i < s.firms.size(); ++i) {
        Mark1Firm& f = s.firms[i];
        if (f.vacancies > 0) {
            hiring.push_back(i);
        } else if (f.vacancies < 0) {
            while (f.vacancies < 0 && !f.employees.empty()) detail::fire(s, f, rng.index(f.employees.size()));
        }
    }
    std::vector<std::uint32_t> unemployed;
    for (std::size_t h = 0; h < s.households.size(); ++h)
        if (!s.households[h].working()) unemployed.push_back(static_cast<std::uint32_t>(h));
    while (!unemployed.empty() && !hiring.empty()) {
        const std::size_t hu = rng.index(unemployed.size());
        const std::size_t hf = rng.index(hiring.size());
        const std::uint32_t h = unemployed[hu];
        const std::size_t fi = hiring[hf];
        detail::hire(s, fi, h);
        unemployed[hu] = unemployed.back();
        unemployed.pop_back();
        if (s.firms[fi].vacancies == 0) {
            hiring[hf] = hiring.back();
            hiring.pop_back();
        }
    }
}

inline void produce_and_pay(Mark1State& s, const SimConfig& cfg) {
    for (auto& f : s.firms) {
        const double staff = static_cast<double>(f.employees.size());
        f.production = std::min(f.target_production, kAlpha * staff);
        f.demand = 0;
        for (std::uint32_t h : f.employees) s.households[h].savings += kWage;
        f.liquidity -= kWage * staff;
        if (f.age < kYoungAge && f.production > 0)
            f.price = std::max(f.price, (1 + cfg.markup) * (kWage * staff + f.interests) / f.production);
    }
}

// Draws: a Fisher-Yates shuffle of the household order, then for each
// household with a positive budget, M distinct firm indices (rejection).
inline void goods_market(Mark1State& s, const SimConfig& cfg, RngStream& rng) {
    rng.shuffle(s.order);
    const std::size_t m = std::min<std::size_t>(static_cast<std::size_t>(cfg.m_goods), s.firms.size());
    std::vector<std::size_t> pick;
    pick.reserve(m);
    for (std::uint32_t hi : s.order) {
        Mark1Household& h = s.households[hi];
        const double budget = cfg.c * h.savings;
        if (!(budget > 0)) continue;
        pick.clear();
        while (pick.size() < m) {
            const std::size_t j = rng.index(s.firms.size());
            if (std::find(pick.begin(), pick.end(), j) == pick.end()) pick.push_back(j);
        }
        for (std::size_t a = 1; a < pick.size(); ++a)  // stable insertion sort, M is tiny
            for (std::size_t b = a; b > 0 && s.firms[pick[b]].price < s.firms[pick[b - 1]].price; --b)
                std::swap(pick[b], pick[b - 1]);
        double spent = 0;
        for (std::size_t k = 0; k < pick.size() && spent < budget; ++k) {
            Mark1Firm& f = s.firms[pick[k]];
            const double stock = f.stock();
            if (!(stock > 0)) continue;
            const double q = (budget - spent) / f.price;
            if (stock > q) {
                f.demand += q;
                f.liquidity += f.price * q;
                spent = budget;
            } else {
                f.demand = f.production;  // sold out; exact so that Y = D holds
                f.liquidity += f.price * stock;
                spent += stock * f.price;
            }
        }
        h.savings -= spent;
    }
}

// Returns false when every firm is bankrupt.
inline bool settle_and_resolve(Mark1State& s, const SimConfig& cfg) {
    double bad = 0;
    std::vector<std::size_t> bankrupt, healthy;
    for (std::size_t i = 0; i < s.firms.size(); ++i) {
        Mark1Firm& f = s.firms[i];
        const double repay = f.interests + cfg.tau * f.total_debt;
        f.liquidity -= repay;
        s.bank.liquidity += repay;
        f.total_debt *= 1 - cfg.tau;
        const double profit = f.price * f.demand - kWage * static_cast<double>(f.employees.size()) - f.interests;
        if (profit > 0) {
            s.owner.savings += cfg.delta * profit;
            f.liquidity -= cfg.delta * profit;
        }
        if (f.liquidity < 0) {
            bad += f.liquidity;
            bankrupt.push_back(i);
        } else {
            healthy.push_back(i);
        }
    }
    s.bankruptcies = static_cast<int>(bankrupt.size());
    if (healthy.empty()) return false;

    double pb = 0, yt = 0, y = 0;
    for (std::size_t i : healthy) {
        pb += s.firms[i].price;
        yt += s.firms[i].target_production;
        y += s.firms[i].production;
    }
    const double nh = static_cast<double>(healthy.size());
    pb /= nh;
    yt /= nh;
    y /= nh;
    for (std::size_t i : bankrupt) {
        Mark1Firm& f = s.firms[i];
        f.price = pb;
        f.production = y;
        f.target_production = yt;
        f.demand = 0;
        f.liquidity = std::min(std::max(s.owner.savings, 0.0), y / kAlpha);
        s.owner.savings -= f.liquidity;
        f.vacancies = 0;
        f.total_debt = 0;
        f.age = 0;
        while (!f.employees.empty()) detail::fire(s, f, f.employees.size() - 1);
        f.vacancies = 0;
    }

    // Bad debt (negative) plus last step's remainder, spread proportionally to
    // positive firm equity and household wealth, never beyond their total.
    const double pool = bad + s.pending_bad_debt;
    double total = 0;
    for (const auto& f : s.firms) total += std::max(f.equity(), 0.0);
    for (const auto& h : s.households) total += std::max(h.savings, 0.0);
    if (pool < 0 && total > 0) {
        const double spread = std::max(pool, -total);
        for (auto& f : s.firms)
            if (f.equity() > 0) f.liquidity += spread * f.equity() / total;
        for (auto& h : s.households)
            if (h.savings > 0) h.savings += spread * h.savings / total;
        s.pending_bad_debt = pool - spread;
    } else {
        s.pending_bad_debt = pool;
    }

    double pd = 0, d = 0;
    for (const auto& f : s.firms) {
        pd += f.price * f.demand;
        d += f.demand;
    }
    if (d > 0) s.p_bar = pd / d;
    return true;
}

inline bool step_mark1(Mark1State& s, const SimConfig& cfg, RngStream& rng) {
    s.probe.begin_step();
    plan_firms(s, cfg, rng);
    job_market(s, rng);
    s.probe.end_step();
    produce_and_pay(s, cfg);
    goods_market(s, cfg, rng);
    const bool ok = settle_and_resolve(s, cfg);
    ++s.t;
    return ok;
}

inline double unemployment(const Mark1State& s) {
    std::size_t employed = 0;
    for (const auto& f : s.firms) employed += f.employees.size();
    return 1.0 - static_cast<double>(employed) / static_cast<double>(s.households.size());
}

inline double mean_rate(const Mark1State& s) {
    double r = 0;
    std::size_t n = 0;
    for (const auto& f : s.firms)
        if (f.total_debt > 0) {
            r += f.rate;
            ++n;
        }
    return n ? r / static_cast<double>(n) : 0.0;
}

inline StepRecord observe(const Mark1State& s, double prev_p_bar) {
    StepRecord r;
    r.t = s.t;
    r.u = unemployment(s);
    r.p_bar = s.p_bar;
    r.w_bar = kWage;
    double hs = 0;
    for (const auto& h : s.households) hs += h.savings;
    r.savings = hs;
    double ep = 0, em = 0;
    for (const auto& f : s.firms) {
        const double e = f.equity();
        if (e > 0) ep += e;
        else em -= e;
    }
    r.leverage = hs + ep > 0 ? em / (hs + ep) : 0.0;
    r.bankruptcies = s.bankruptcies;
    r.active = s.firms.size();
    r.inflation = std::log(s.p_bar) - std::log(prev_p_bar);
    r.r_measured = measure_asymmetry(s.probe);
    r.mean_rate = mean_rate(s);
    return r;
}

// The asymmetry probe restarts at t = burn_in so that R_measured in the final
// row is the post-burn-in average.
template <class Observer>
RunResult run_mark1(const SimConfig& cfg, Observer&& on_step) {
    validate(cfg, Engine::mark1);
    RunResult out;
    out.manifest.engine = Engine::mark1;
    out.manifest.config = cfg;
    out.manifest.seed = cfg.seed;
    out.manifest.start_time = utc_timestamp();
    const auto t0 = std::chrono::steady_clock::now();

    RngStream rng(cfg.seed);
    Mark1State s = init_mark1(cfg);
    out.series.reserve(static_cast<std::size_t>(cfg.horizon));
    double prev = s.p_bar;
    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        if (t == cfg.burn_in && t > 0) s.probe.reset();
        if (!step_mark1(s, cfg, rng)) {
            out.manifest.termination = Termination::collapsed;
            break;
        }
        out.series.push_back(observe(s, prev));
        prev = s.p_bar;
        on_step(s, out.series.back());
    }
    out.manifest.end_time = utc_timestamp();
    out.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

inline RunResult run_mark1(const SimConfig& cfg) {
    return run_mark1(cfg, [](const Mark1State&, const StepRecord&) {});
}

}  // namespace tipping::mark1
