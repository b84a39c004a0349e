#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "../core/rng.hpp"

namespace tipping::theory {

enum class RepresentativeVerdict { full_employment, collapse };

inline const char* to_string(RepresentativeVerdict v) {
    return v == RepresentativeVerdict::collapse ? "collapse" : "full_employment";
}

struct RepresentativeParams {
    double eta_plus = 0.015;
    double eta_minus = 0.01;
    double gamma = 0.05;
    std::size_t horizon = 20000;
    std::optional<double> p0;       // drawn uniformly in [1 - gamma, 1 + gamma] if absent
    std::optional<double> y_cap;    // e.g. 1 to bound output at full employment
};

struct RepresentativeResult {
    std::vector<double> y;
    std::vector<double> p;
    double growth_rate = 0;  // mean log growth of the uncapped output over the second half
    RepresentativeVerdict verdict = RepresentativeVerdict::full_employment;
};

// Single-firm economy: demand is Y/p, so the firm grows when p < 1 and
// shrinks when p > 1, while the price does a bounded random walk around 1.
inline RepresentativeResult representative_firm(const RepresentativeParams& prm, RngStream& rng) {
    for (double v : {prm.eta_plus, prm.eta_minus, prm.gamma})
        if (!(v >= 0 && v <= 1)) throw std::domain_error("representative_firm: eta_plus, eta_minus and gamma must lie in [0, 1]");
    double p = prm.p0 ? *prm.p0 : 1.0 + prm.gamma * (2.0 * rng.uniform() - 1.0);
    if (!(p > 0)) throw std::domain_error("representative_firm: p0 must be positive");
    double y = 1.0, log_y = 0.0, log_half = 0.0;
    const std::size_t half = prm.horizon / 2;
    RepresentativeResult r;
    r.y.reserve(prm.horizon);
    r.p.reserve(prm.horizon);
    for (std::size_t t = 0; t < prm.horizon; ++t) {
        const double xi = rng.uniform();
        const double eta = p < 1.0 ? prm.eta_plus : prm.eta_minus;
        const double factor = 1.0 + eta * (1.0 / p - 1.0);
        log_y += std::log(factor);
        y *= factor;
        if (prm.y_cap) y = std::min(y, *prm.y_cap);
        if (p < 1.0) p *= 1.0 + prm.gamma * xi;
        else if (p > 1.0) p *= 1.0 - prm.gamma * xi;
        r.y.push_back(y);
        r.p.push_back(p);
        if (t + 1 == half) log_half = log_y;
    }
    const std::size_t span = prm.horizon - half;
    r.growth_rate = span > 0 ? (log_y - log_half) / static_cast<double>(span) : 0.0;
    r.verdict = r.growth_rate < 0 ? RepresentativeVerdict::collapse : RepresentativeVerdict::full_employment;
    return r;
}

// R = eta_+/eta_- at which the mean log growth changes sign, at fixed eta_-.
// The price path does not depend on eta, so every evaluation reuses the same
// seed and the growth rate is monotone in R.
inline double representative_transition(double gamma, double eta_minus, std::size_t horizon, std::uint64_t seed,
                                        double r_lo = 0.2, double r_hi = 2.0, int iterations = 40) {
    auto growth = [&](double R) {
        RepresentativeParams prm;
        prm.gamma = gamma;
        prm.eta_minus = eta_minus;
        prm.eta_plus = R * eta_minus;
        prm.horizon = horizon;
        RngStream rng(seed);
        return representative_firm(prm, rng).growth_rate;
    };
    if (growth(r_lo) >= 0 || growth(r_hi) < 0) throw std::runtime_error("representative_transition: no sign change in [r_lo, r_hi]");
    for (int k = 0; k < iterations; ++k) {
        const double m = 0.5 * (r_lo + r_hi);
        if (growth(m) < 0) r_lo = m;
        else r_hi = m;
    }
    return 0.5 * (r_lo + r_hi);
}

}  // namespace tipping::theory
