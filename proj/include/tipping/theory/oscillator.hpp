#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "../core/rng.hpp"

namespace tipping::theory {

inline void check_C(double C, const char* who) {
    if (!(C > 0 && C < 1)) throw std::domain_error(std::string(who) + ": C must lie in (0, 1)");
}

struct OscillatorFixedPoint {
    double lambda_bar;
    double alpha_bar;
};

inline OscillatorFixedPoint oscillator_fixed_point(double C) {
    const double l = (1.0 - C) / 6.0;
    return {l, (2.0 - C) * l};
}

struct OscillatorResult {
    std::vector<double> lambda_bar;
    std::vector<double> alpha_bar;
    double range_q2 = 0;  // max - min of lambda-bar over the second quarter
    double range_q4 = 0;  // same over the final quarter
    double amplitude = 0; // standard deviation of lambda-bar over the final quarter
    bool sustained = false;
};

// Absolute amplitude below which lambda-bar fluctuations are treated as
// finite-N noise rather than an oscillation.
inline constexpr double kOscillationFloor = 0.05;

// Agent-level schematic oscillator: eps_i = C lambda_i closes the savings and
// price-offset dynamics. lambda_i start uniform on [-1, 1], alpha_i at zero.
inline OscillatorResult simulate_schematic_oscillator(std::size_t n_agents, double C, std::size_t horizon, RngStream& rng) {
    check_C(C, "simulate_schematic_oscillator");
    if (n_agents == 0) throw std::invalid_argument("simulate_schematic_oscillator: n_agents must be positive");
    std::vector<double> lam(n_agents), alpha(n_agents, 0.0);
    for (auto& l : lam) l = 2.0 * rng.uniform() - 1.0;

    OscillatorResult r;
    r.lambda_bar.reserve(horizon);
    r.alpha_bar.reserve(horizon);
    const double dn = static_cast<double>(n_agents);
    for (std::size_t t = 0; t < horizon; ++t) {
        double lbar = 0, abar = 0;
        for (std::size_t i = 0; i < n_agents; ++i) {
            lbar += lam[i];
            abar += alpha[i];
        }
        lbar /= dn;
        abar /= dn;
        r.lambda_bar.push_back(lbar);
        r.alpha_bar.push_back(abar);

        const double e = (abar - C * lbar) / (2.0 * (1.0 - C));
        const double lo = std::min(lbar, e), hi = std::max(lbar, e);
        const double shift = 0.5 * (abar - C * lbar);
        for (std::size_t i = 0; i < n_agents; ++i) {
            const double l = lam[i];
            alpha[i] -= std::min(l, C * l + shift);
            const double xi = rng.uniform();
            if (l < lo) lam[i] = l + xi;
            else if (l > hi) lam[i] = l - xi;
        }
    }

    auto range = [&](std::size_t a, std::size_t b) {
        if (b <= a) return 0.0;
        auto [mn, mx] = std::minmax_element(r.lambda_bar.begin() + static_cast<long>(a), r.lambda_bar.begin() + static_cast<long>(b));
        return *mx - *mn;
    };
    const std::size_t q = horizon / 4;
    r.range_q2 = range(q, 2 * q);
    r.range_q4 = range(horizon - q, horizon);
    if (q > 0) {
        double s = 0, ss = 0;
        for (std::size_t t = horizon - q; t < horizon; ++t) s += r.lambda_bar[t];
        const double m = s / static_cast<double>(q);
        for (std::size_t t = horizon - q; t < horizon; ++t) ss += (r.lambda_bar[t] - m) * (r.lambda_bar[t] - m);
        r.amplitude = std::sqrt(ss / static_cast<double>(q));
    }
    r.sustained = r.range_q4 >= 0.5 * r.range_q2 && r.amplitude >= kOscillationFloor;
    return r;
}

enum class MapVerdict { converges, period2, diverges, irregular };

inline const char* to_string(MapVerdict v) {
    switch (v) {
        case MapVerdict::converges: return "converges";
        case MapVerdict::period2: return "period2";
        case MapVerdict::diverges: return "diverges";
        case MapVerdict::irregular: return "irregular";
    }
    return "?";
}

struct MapResult {
    std::vector<double> lambda_bar;  // deviation from the fixed point
    std::vector<double> alpha_bar;
    MapVerdict verdict = MapVerdict::irregular;
};

// Two-variable closure where the lambda distribution stays a tent centred on
// lambda-bar. Starts at the fixed point with lambda-bar displaced by `kick`.
inline MapResult moment_map_simple(double C, std::size_t horizon, double kick = 1e-3) {
    check_C(C, "moment_map_simple");
    auto sgn = [](double x) { return static_cast<double>((x > 0) - (x < 0)); };
    const auto fp = oscillator_fixed_point(C);
    double l = fp.lambda_bar + kick, a = fp.alpha_bar;
    MapResult r;
    for (std::size_t t = 0; t < horizon; ++t) {
        const double e = (a - C * l) / (2.0 * (1.0 - C));
        const double A = e - l;
        const double lo = std::min(l, e), hi = std::max(l, e);
        const double a_next = a - l - (1.0 - C) / 6.0 * (-1.0 + 3.0 * A - 3.0 * A * A + A * A * A * sgn(A));
        const double l_next = 0.5 * (lo + hi - 0.5 * (lo - l) * (lo - l) * sgn(lo - l) - 0.5 * (hi - l) * (hi - l) * sgn(hi - l));
        l = l_next;
        a = a_next;
        r.lambda_bar.push_back(l - fp.lambda_bar);
        r.alpha_bar.push_back(a);
        if (!std::isfinite(l) || std::abs(l) > 1e6) {
            r.verdict = MapVerdict::diverges;
            return r;
        }
    }
    const auto& x = r.lambda_bar;
    const std::size_t n = x.size();
    if (n < 4) return r;
    const double tol = 1e-8;
    const double last = std::max({std::abs(x[n - 1]), std::abs(x[n - 2]), std::abs(x[n - 3]), std::abs(x[n - 4])});
    if (last < tol) r.verdict = MapVerdict::converges;
    else if (std::abs(x[n - 1] - x[n - 3]) < tol && std::abs(x[n - 2] - x[n - 4]) < tol && std::abs(x[n - 1] - x[n - 2]) > tol)
        r.verdict = MapVerdict::period2;
    else r.verdict = MapVerdict::irregular;
    return r;
}

// Smallest C at which moment_map_simple stops converging, by bisection.
inline double moment_map_simple_onset(double lo = 0.5, double hi = 0.99, std::size_t horizon = 5000, int iterations = 40) {
    for (int k = 0; k < iterations; ++k) {
        const double m = 0.5 * (lo + hi);
        if (moment_map_simple(m, horizon).verdict == MapVerdict::converges) lo = m;
        else hi = m;
    }
    return 0.5 * (lo + hi);
}

enum class LinearVerdict { damped, sustained };

inline const char* to_string(LinearVerdict v) { return v == LinearVerdict::damped ? "damped" : "sustained"; }

struct LinearMapResult {
    std::vector<double> dl1;
    std::vector<double> dl2;
    double growth_rate = 0;  // mean log growth of the amplitude per step over the second half
    LinearVerdict verdict = LinearVerdict::damped;
};

// Perturbative map for the deviations (dl1, dl2) of lambda-bar and alpha-bar.
// The map is positively homogeneous, so the state is renormalised every step
// and the amplitude is tracked through the accumulated log scale. The
// recorded trajectory is in normalised units.
inline LinearMapResult moment_map_linear(double C, std::size_t horizon, double dl1_0 = 1e-3, double dl2_0 = 0.0) {
    check_C(C, "moment_map_linear");
    if (C > 0.999) throw std::domain_error("moment_map_linear: C/(4(1-C)) is singular as C -> 1; C must be <= 0.999");
    const double k = C / (4.0 * (1.0 - C));
    double a = dl1_0, b = dl2_0;
    double a1 = a, b1 = b, a2 = a, b2 = b;  // values at t-1 and t-2
    double log_scale = 0, log_half = 0;
    LinearMapResult r;
    r.dl1.reserve(horizon);
    r.dl2.reserve(horizon);
    const std::size_t half = horizon / 2;
    for (std::size_t t = 0; t < horizon; ++t) {
        const double m1 = std::max(a1, b1);
        const double d2 = std::abs(b2 - a2);
        const double na = 0.5 * (a + b);
        const double nb = 0.75 * b - 0.25 * m1 + 7.0 / 24.0 * d2 - k * (a + b);
        a2 = a1;
        b2 = b1;
        a1 = a;
        b1 = b;
        a = na;
        b = nb;
        const double s = std::max({std::abs(a), std::abs(b), std::abs(a1), std::abs(b1), std::abs(a2), std::abs(b2)});
        if (s == 0) {
            r.growth_rate = -std::numeric_limits<double>::infinity();
            r.verdict = LinearVerdict::damped;
            return r;
        }
        log_scale += std::log(s);
        for (double* v : {&a, &b, &a1, &b1, &a2, &b2}) *v /= s;
        r.dl1.push_back(a);
        r.dl2.push_back(b);
        if (t + 1 == half) log_half = log_scale;
    }
    const std::size_t span = horizon - half;
    r.growth_rate = span > 0 ? (log_scale - log_half) / static_cast<double>(span) : 0.0;
    r.verdict = r.growth_rate >= 0 ? LinearVerdict::sustained : LinearVerdict::damped;
    return r;
}

inline double moment_map_linear_onset(double lo = 0.5, double hi = 0.99, std::size_t horizon = 20000, int iterations = 30) {
    for (int k = 0; k < iterations; ++k) {
        const double m = 0.5 * (lo + hi);
        if (moment_map_linear(m, horizon).verdict == LinearVerdict::damped) lo = m;
        else hi = m;
    }
    return 0.5 * (lo + hi);
}

}  // namespace tipping::theory
