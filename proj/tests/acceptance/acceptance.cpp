// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [substring ...]   runs only criteria whose name contains one of the substrings

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tipping/analytics/equilibration.hpp"
#include "tipping/analytics/phase.hpp"
#include "tipping/analytics/spectrum.hpp"
#include "tipping/io/config_file.hpp"
#include "tipping/io/csv.hpp"
#include "tipping/io/manifest.hpp"
#include "tipping/mark0/engine.hpp"
#include "tipping/mark1/engine.hpp"
#include "tipping/mark1/transition.hpp"
#include "tipping/run.hpp"
#include "tipping/sweep/sweep.hpp"
#include "tipping/theory/critical_line.hpp"
#include "tipping/theory/density.hpp"
#include "tipping/theory/oscillator.hpp"
#include "tipping/theory/reduced.hpp"
#include "tipping/theory/representative.hpp"

using namespace tipping;
using analytics::PhaseLabel;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    // Records a sub-check; the criterion passes only if every sub-check does.
    void check(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [miss]");
    }
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n, my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

double post_burn_in_mean(const RunResult& r, double StepRecord::*field, std::int64_t burn_in) {
    double s = 0;
    std::size_t n = 0;
    for (std::size_t i = static_cast<std::size_t>(burn_in); i < r.series.size(); ++i, ++n) s += r.series[i].*field;
    return n ? s / static_cast<double>(n) : std::nan("");
}

double post_burn_in_std(const std::vector<double>& u, std::size_t burn_in) {
    const double n = static_cast<double>(u.size() - burn_in);
    double m = 0, ss = 0;
    for (std::size_t i = burn_in; i < u.size(); ++i) m += u[i];
    m /= n;
    for (std::size_t i = burn_in; i < u.size(); ++i) ss += (u[i] - m) * (u[i] - m);
    return std::sqrt(ss / n);
}

SimConfig mark0_base() {
    SimConfig c = default_config(Engine::mark0);
    c.n_firms = 1000;
    c.horizon = 20000;
    c.burn_in = 10000;
    c.eta_minus = 0.1;
    return c;
}

// The oscillating full-employment setting: eta_+ = 0.5, eta_- = 0.3, Theta = 5.
SimConfig oscillation_base(std::size_t n_firms) {
    SimConfig c = default_config(Engine::mark0);
    c.n_firms = n_firms;
    c.eta_plus = 0.5;
    c.eta_minus = 0.3;
    c.theta = 5;
    c.beta = 2;
    c.gamma_p = 0.1;
    c.horizon = 14000;
    c.burn_in = 4000;
    return c;
}

sweep::Cell run_cell(const SimConfig& base, double R, double theta, int seeds, std::uint64_t master) {
    sweep::SweepSpec spec;
    spec.engine = Engine::mark0;
    spec.base = base;
    spec.axes = {{"R", {R}}, {"theta", {theta}}};
    spec.seeds_per_cell = seeds;
    spec.master_seed = master;
    return sweep::run_sweep(spec, sweep::default_workers()).at(0, 0);
}

std::string label_str(const std::optional<PhaseLabel>& l) { return l ? analytics::to_string(*l) : "NA"; }

// ---------------------------------------------------------------- Mark I+

const std::vector<double> kRhoGrid = {0.0, 0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035};

const std::vector<mark1::RatePoint>& mark1_scan() {
    static const std::vector<mark1::RatePoint> pts = [] {
        SimConfig c = default_config(Engine::mark1);
        c.n_firms = 1000;
        c.mu = 10;
        c.horizon = 40000;
        c.burn_in = 20000;
        return mark1::scan_rates(c, kRhoGrid, 5, 20150101, sweep::default_workers());
    }();
    return pts;
}

double median_r(const mark1::RatePoint& p) {
    std::vector<double> r;
    for (const auto& run : p.runs) r.push_back(run.r_measured);
    return median(r);
}

Verdict mark1_tipping_point() {
    Verdict v;
    const auto& pts = mark1_scan();
    std::ostringstream curve;
    bool low_ok = true, high_ok = true;
    std::vector<double> x, y;
    for (const auto& p : pts) {
        curve << (curve.tellp() > 0 ? " " : "") << fmt(100 * p.rho0, 2) << "%:" << fmt(p.mean_u, 3);
        if (p.rho0 <= 0.015 + 1e-12) low_ok = low_ok && p.mean_u < 0.2;
        if (p.rho0 >= 0.035 - 1e-12) high_ok = high_ok && p.mean_u > 0.8;
        x.push_back(p.rho0);
        y.push_back(p.mean_u);
    }
    v.detail << "u(rho0) " << curve.str();
    v.check(low_ok, "u < 0.2 for rho0 <= 1.5%");
    v.check(high_ok, "u > 0.8 for rho0 >= 3.5%");
    const auto cross = sweep::find_crossing(x, y, 0.5);
    v.check(cross && *cross >= 0.015 && *cross <= 0.035,
            "u = 0.5 crossing at " + (cross ? fmt(100 * *cross, 3) + "%" : std::string("none")) + " in [1.5%, 3.5%]");
    const auto tr = mark1::find_transition(pts);
    v.detail << "; first rate with u > 0.8: " << (tr.rho_c ? fmt(100 * *tr.rho_c, 3) + "%" : std::string("none"));
    return v;
}

Verdict mark1_asymmetry_ratio() {
    Verdict v;
    const auto& pts = mark1_scan();
    std::vector<double> x, r;
    std::ostringstream curve;
    for (const auto& p : pts) {
        x.push_back(p.rho0);
        r.push_back(median_r(p));
        curve << (curve.tellp() > 0 ? " " : "") << fmt(100 * p.rho0, 2) << "%:" << fmt(r.back(), 3);
    }
    v.detail << "median R " << curve.str();
    const double rho = spearman(x, r);
    v.check(rho < -0.8, "Spearman " + fmt(rho, 3) + " < -0.8");
    // Last grid rate whose seed majority has not collapsed.
    std::optional<std::size_t> last_alive;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        int alive = 0;
        for (const auto& run : pts[i].runs) alive += !run.collapsed && run.mean_u < 0.8;
        if (2 * alive > static_cast<int>(pts[i].runs.size())) last_alive = i;
    }
    const bool drops = last_alive && *last_alive > 0 && r[*last_alive] < r[0];
    v.check(drops, "R before collapse " + (last_alive ? fmt(r[*last_alive], 3) + " at " + fmt(100 * x[*last_alive], 2) + "%" : std::string("n/a")) +
                       " < R(0) " + fmt(r[0], 3));
    return v;
}

// ---------------------------------------------------------------- Mark 0

Verdict mark0_critical_line() {
    Verdict v;
    SimConfig c = default_config(Engine::mark0);
    c.n_firms = 2000;
    c.horizon = 30000;
    c.burn_in = 15000;
    c.theta = kInf;
    c.beta = 2;
    c.gamma_p = 0.1;
    c.eta_minus = 0.05;
    const double rc = theory::critical_R(c.gamma_p, c.beta, theory::CriticalMethod::closed);
    auto is_fu = [&](double R) {
        const auto cell = run_cell(c, R, kInf, 3, 733);
        return cell.label == PhaseLabel::FU;
    };
    double lo = 0.4, hi = 1.1;  // FU at lo, not FU at hi
    const bool bracket = is_fu(lo) && !is_fu(hi);
    v.check(bracket, "FU at R = 0.4 and not FU at R = 1.1");
    if (bracket) {
        for (int k = 0; k < 7; ++k) {
            const double m = 0.5 * (lo + hi);
            (is_fu(m) ? lo : hi) = m;
        }
    }
    const double flip = 0.5 * (lo + hi);
    v.check(bracket && std::abs(flip - rc) <= 0.07, "flip at R = " + fmt(flip, 4) + " vs closed R_c = " + fmt(rc, 4) + " (tol 0.07)");
    return v;
}

Verdict phase_topology() {
    Verdict v;
    struct Want {
        double R, theta;
        PhaseLabel label;
    };
    const Want cells[] = {{0.6, 5, PhaseLabel::FU}, {3, 0.3, PhaseLabel::RU}, {3, 3, PhaseLabel::EC}, {3, 20, PhaseLabel::FE}};
    std::uint64_t master = 400;
    for (const auto& w : cells) {
        const auto cell = run_cell(mark0_base(), w.R, w.theta, 5, ++master);
        std::string seeds;
        for (const auto& r : cell.runs) seeds += (seeds.empty() ? "" : ",") + label_str(r.label);
        v.check(cell.label == w.label, "(R=" + fmt(w.R) + ", theta=" + fmt(w.theta) + ") " + label_str(cell.label) + " want " +
                                           analytics::to_string(w.label) + " [" + seeds + "]");
    }
    return v;
}

Verdict ec_suppression_by_f() {
    Verdict v;
    SimConfig base = mark0_base();
    const double theta = 3;
    base.f = 0.9;
    const auto hi = run_cell(base, 3, theta, 10, 810);
    base.f = 0.7;
    const auto lo = run_cell(base, 3, theta, 10, 811);
    v.check(hi.label == PhaseLabel::EC, "f=0.9: " + label_str(hi.label) + " (amplitude " + fmt(hi.amplitude, 3) + ")");
    v.check(lo.label != PhaseLabel::EC && lo.amplitude <= 0.05,
            "f=0.7: " + label_str(lo.label) + " (amplitude " + fmt(lo.amplitude, 3) + " <= 0.05)");
    v.detail << "; R=3, eta_-=0.1, theta=" << theta;
    return v;
}

struct OscillationProbe {
    std::optional<double> period;
    double significance = 0;
    double amplitude = 0;  // post-burn-in standard deviation of u
};

OscillationProbe probe_oscillation(const SimConfig& c) {
    const RunResult r = mark0::run_mark0(c);
    OscillationProbe o;
    if (r.truncated()) return o;
    const auto u = r.u_series();
    const auto s = analytics::power_spectrum(u, static_cast<std::size_t>(c.burn_in));
    o.period = s.peak_period();
    o.significance = s.peak_significance;
    o.amplitude = post_burn_in_std(u, static_cast<std::size_t>(c.burn_in));
    return o;
}

Verdict oscillations() {
    Verdict v;
    std::vector<double> amp_small, amp_large, periods;
    bool all_peaks = true;
    for (std::uint64_t k = 0; k < 3; ++k) {
        SimConfig small = oscillation_base(2000), large = oscillation_base(10000);
        small.seed = derive_run_seed(60, {static_cast<std::int64_t>(k), 0});
        large.seed = derive_run_seed(60, {static_cast<std::int64_t>(k), 1});
        const auto a = probe_oscillation(small), b = probe_oscillation(large);
        amp_small.push_back(a.amplitude);
        amp_large.push_back(b.amplitude);
        for (const auto* o : {&a, &b}) {
            all_peaks = all_peaks && o->period.has_value();
            if (o->period) periods.push_back(*o->period);
        }
    }
    std::string ps;
    for (double p : periods) ps += (ps.empty() ? "" : ",") + fmt(p, 3);
    v.check(all_peaks, "significant peak in every run (periods " + ps + ")");
    const bool in_band = !periods.empty() && std::all_of(periods.begin(), periods.end(), [](double p) { return p >= 5 && p <= 10; });
    v.check(in_band, "period in [5, 10]");
    const double ms = median(amp_small), ml = median(amp_large);
    // 1/sqrt(N) noise would shrink by 0.45 at 5x N.
    v.check(ml >= 0.75 * ms, "std(u) N=10000 " + fmt(ml, 3) + " >= 0.75 x N=2000 " + fmt(ms, 3));
    return v;
}

Verdict wage_extension() {
    Verdict v;
    auto mean_inflation = [](double R, double theta, std::uint64_t seed) {
        SimConfig c = mark0_base();
        c.eta_plus = R * c.eta_minus;
        c.theta = theta;
        c.gamma_w = 1.0 * c.gamma_p;
        c.seed = seed;
        const RunResult r = mark0::run_mark0(c);
        return std::pair{post_burn_in_mean(r, &StepRecord::inflation, c.burn_in), post_burn_in_mean(r, &StepRecord::u, c.burn_in)};
    };
    std::vector<double> fe, fu;
    for (std::uint64_t k = 1; k <= 3; ++k) {
        const auto [infl_fe, u_fe] = mean_inflation(3, 20, 700 + k);
        const auto [infl_fu, u_fu] = mean_inflation(0.6, 5, 710 + k);
        fe.push_back(infl_fe);
        fu.push_back(infl_fu);
        v.detail << (k > 1 ? "; " : "") << "seed " << k << ": FE u=" << fmt(u_fe, 3) << " FU u=" << fmt(u_fu, 3);
    }
    v.check(median(fe) > 0, "z=1 FE cell (R=3, theta=20) inflation " + fmt(median(fe), 3) + " > 0");
    v.check(median(fu) < 0, "z=1 FU cell (R=0.6, theta=5) inflation " + fmt(median(fu), 3) + " < 0");
    for (double z : {0.1, 0.5}) {
        SimConfig c = oscillation_base(2000);
        c.gamma_w = z * c.gamma_p;
        c.seed = 77;
        const auto o = probe_oscillation(c);
        const std::string what = "z=" + fmt(z) + " peak " + (o.period ? "period " + fmt(*o.period, 3) : std::string("absent"));
        v.check(z < 0.25 ? o.period.has_value() : !o.period.has_value(), what + (z < 0.25 ? " (want present)" : " (want absent)"));
    }
    return v;
}

Verdict policy_experiment() {
    Verdict v;
    SimConfig c = mark0_base();
    c.n_firms = 2000;
    c.eta_plus = 0.2;
    c.eta_minus = 0.1;
    c.theta = 2;
    std::vector<double> amp_off, amp_on, cnt_off, cnt_on;
    for (int k = 0; k < 10; ++k) {
        c.seed = derive_run_seed(88, {k});
        for (bool on : {false, true}) {
            SimConfig ck = c;
            if (on) ck.policy = PolicyRule{0.1, 10.0};
            const RunResult r = mark0::run_mark0(ck);
            analytics::CrisisStats cs;
            if (!r.truncated()) cs = analytics::crisis_stats(r.u_series(), static_cast<std::size_t>(ck.burn_in));
            (on ? amp_on : amp_off).push_back(cs.mean_amplitude);
            (on ? cnt_on : cnt_off).push_back(cs.count);
        }
    }
    const double a0 = median(amp_off), a1 = median(amp_on), n0 = median(cnt_off), n1 = median(cnt_on);
    v.check(a1 < a0, "median amplitude on " + fmt(a1, 3) + " < off " + fmt(a0, 3));
    v.check(n1 > n0, "median crisis count on " + fmt(n1, 3) + " > off " + fmt(n0, 3));
    return v;
}

// ---------------------------------------------------------------- theory

Verdict theory_suite() {
    using namespace theory;
    Verdict v;
    auto timed = [&](const std::string& name, const std::function<std::pair<bool, std::string>()>& f) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [ok, what] = f();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        v.check(ok && secs < 1.0, name + ": " + what + " (" + fmt(secs, 2) + " s)");
    };
    timed("tent", [] {
        const auto t = DensityGrid::sample(tent);
        const double d = l1_distance(apply_L0(t), t);
        return std::pair{d < 1e-3 && t.n_bins == 2001, "L1 " + fmt(d, 3)};
    });
    timed("perturbative", [] {
        const double d5 = perturbative_check(0.05).distance, d10 = perturbative_check(0.1).distance;
        const double order = std::log2(d10 / d5);
        return std::pair{d5 < 0.01 && std::abs(order - 2) <= 0.5, "d(0.05) " + fmt(d5, 3) + ", order " + fmt(order, 3)};
    });
    for (double beta : {0.0, 2.0, 4.0}) {
        timed("critical_R beta=" + fmt(beta), [beta] {
            const double d = std::abs(critical_R(0.05, beta, CriticalMethod::numeric) - critical_R(0.05, beta, CriticalMethod::closed));
            return std::pair{d < 0.01, "|numeric - closed| " + fmt(d, 3)};
        });
    }
    for (double beta : {0.0, 2.0}) {
        timed("reduced beta=" + fmt(beta), [beta] {
            RngStream rng(5);
            ReducedParams p;
            p.gamma = 0.05;
            p.beta = beta;
            p.n_agents = 10000;
            p.horizon = 2000;
            const double want = -p.gamma * (1 + beta) / 4;
            const double got = simulate_reduced(p, rng).lambda_bar_mean;
            return std::pair{std::abs(got - want) <= 0.2 * std::abs(want), "lambda-bar " + fmt(got, 3) + " vs " + fmt(want, 3)};
        });
    }
    timed("oscillator", [] {
        RngStream a(1), b(2);
        const bool damped = !simulate_schematic_oscillator(1000, 0.3, 4000, a).sustained;
        const bool sustained = simulate_schematic_oscillator(1000, 0.6, 4000, b).sustained;
        return std::pair{damped && sustained, std::string(damped ? "damped" : "sustained") + " at 0.3, " + (sustained ? "sustained" : "damped") + " at 0.6"};
    });
    timed("linear onset", [] {
        const double c = moment_map_linear_onset();
        return std::pair{c >= 0.89 && c <= 0.93, fmt(c, 4)};
    });
    timed("simple onset", [] {
        const double c = moment_map_simple_onset();
        return std::pair{c >= 0.90 && c <= 0.97, fmt(c, 4)};
    });
    timed("representative", [] {
        const double rt = representative_transition(0.05, 0.01, 20000, 1);
        const double rc = critical_R(0.05, 0, CriticalMethod::closed);
        return std::pair{std::abs(rt - rc) <= 0.1, fmt(rt, 4) + " vs " + fmt(rc, 4)};
    });
    return v;
}

// ---------------------------------------------------------------- conservation, determinism

Verdict conservation_and_determinism() {
    Verdict v;
    RngStream pick(31337);
    double worst0 = 0;
    for (int trial = 0; trial < 4; ++trial) {
        SimConfig c = default_config(Engine::mark0);
        c.n_firms = 200;
        c.horizon = 10000;
        c.beta = 4 * pick.uniform();
        c.gamma_p = 0.01 + 0.2 * pick.uniform();
        c.gamma_w = trial % 2 ? 0.05 * pick.uniform() : 0.0;
        c.eta_minus = 0.05 + 0.4 * pick.uniform();
        c.eta_plus = 0.05 + 0.5 * pick.uniform();
        c.theta = 1 + 4 * pick.uniform();
        c.f = pick.uniform();
        if (trial == 2) c.policy = PolicyRule{0.1, c.theta + 5};
        c.seed = 500 + static_cast<std::uint64_t>(trial);
        const double m0 = static_cast<double>(c.n_firms);
        mark0::run_mark0(c, [&](const mark0::Mark0State& s, const StepRecord&) {
            double gross = std::abs(s.household.savings);
            for (const auto& f : s.firms) gross += std::abs(f.deposits);
            worst0 = std::max(worst0, std::abs(mark0::audit_money(s) - m0) / std::max(m0, gross));
        });
    }
    v.check(worst0 < 1e-8, "Mark 0 drift " + fmt(worst0, 3));

    double worst1 = 0;
    for (int trial = 0; trial < 3; ++trial) {
        SimConfig c = default_config(Engine::mark1);
        c.n_firms = 100;
        c.horizon = 10000;
        c.rho0 = 0.05 * pick.uniform();
        c.gamma_p = 0.02 + 0.15 * pick.uniform();
        c.gamma_y = 0.02 + 0.15 * pick.uniform();
        c.delta = 0.5 * pick.uniform();
        c.m_goods = 1 + trial;
        c.seed = 600 + static_cast<std::uint64_t>(trial);
        std::optional<double> m0;
        mark1::run_mark1(c, [&](const mark1::Mark1State& s, const StepRecord&) {
            const double m = mark1::audit_money(s);
            if (!m0) m0 = m;
            worst1 = std::max(worst1, std::abs(m - *m0) / std::abs(*m0));
        });
    }
    v.check(worst1 < 1e-8, "Mark I+ drift " + fmt(worst1, 3));

    const auto dir = std::filesystem::temp_directory_path() / "tipping_acceptance_replay";
    bool replay_ok = true;
    for (Engine e : {Engine::mark0, Engine::mark1}) {
        SimConfig c = default_config(e);
        c.n_firms = 100;
        c.horizon = 2000;
        c.theta = 3;
        c.rho0 = 0.02;
        c.seed = 4242;
        std::filesystem::remove_all(dir);
        io::write_run(dir, run_engine(e, c));
        const auto in = io::load_manifest((dir / io::kManifestFile).string());
        std::ostringstream again;
        io::write_series_csv(again, run_engine(in.engine, in.config));
        replay_ok = replay_ok && again.str() == io::read_file((dir / io::kSeriesFile).string());
    }
    std::filesystem::remove_all(dir);
    v.check(replay_ok, "manifest replay bit-identical for both engines");

    sweep::SweepSpec spec;
    spec.engine = Engine::mark0;
    spec.base = default_config(Engine::mark0);
    spec.base.n_firms = 100;
    spec.base.horizon = 3000;
    spec.base.burn_in = 1000;
    spec.axes = {{"R", {0.5, 3.0}}, {"theta", {1, 10}}};
    spec.seeds_per_cell = 3;
    const auto one = sweep::run_sweep(spec, 1), eight = sweep::run_sweep(spec, 8);
    bool same = one.cells.size() == eight.cells.size();
    for (std::size_t i = 0; same && i < one.cells.size(); ++i)
        for (std::size_t k = 0; k < one.cells[i].runs.size(); ++k) {
            const auto &a = one.cells[i].runs[k], &b = eight.cells[i].runs[k];
            same = same && a.seed == b.seed && a.label == b.label && a.mean_u == b.mean_u && a.amplitude == b.amplitude;
        }
    v.check(same, "sweep identical with 1 and 8 workers");
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"theory_oracles", theory_suite},
        {"conservation_determinism", conservation_and_determinism},
        {"mark0_critical_line", mark0_critical_line},
        {"phase_topology", phase_topology},
        {"ec_suppression_by_f", ec_suppression_by_f},
        {"oscillations", oscillations},
        {"wage_extension", wage_extension},
        {"policy_experiment", policy_experiment},
        {"mark1_tipping_point", mark1_tipping_point},
        {"mark1_asymmetry_ratio", mark1_asymmetry_ratio},
    };
    std::vector<std::string> filters(argv + 1, argv + argc);
    int failed = 0, ran = 0;
    for (const auto& [name, run] : criteria) {
        if (!filters.empty() &&
            std::none_of(filters.begin(), filters.end(), [&](const std::string& f) { return name.find(f) != std::string::npos; }))
            continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << "exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail.str() << " [" << fmt(secs, 3) << " s]" << std::endl;
        failed += !v.pass;
    }
    std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
