#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "../core/rng.hpp"

namespace tipping::theory {

enum class ReducedVerdict { full_employment, collapse };

inline const char* to_string(ReducedVerdict v) { return v == ReducedVerdict::collapse ? "collapse" : "full_employment"; }

struct ReducedParams {
    std::size_t n_agents = 10000;
    double gamma = 0.05;
    double beta = 0;
    double eta_plus = 0.01;
    double eta_minus = 0.01;
    std::size_t horizon = 4000;
    // Drops the full-employment floor: z-bar may turn negative and output
    // then grows without bound.
    bool unbounded = false;
};

struct ReducedResult {
    std::vector<double> lambda_bar;
    std::vector<double> z_bar;
    ReducedVerdict verdict = ReducedVerdict::full_employment;
    double z_slope = 0;           // least-squares slope of z-bar over the second half
    double lambda_bar_mean = 0;   // time average of lambda-bar over the second half
};

namespace detail {

inline double half_slope(const std::vector<double>& y) {
    const std::size_t a = y.size() / 2, n = y.size() - a;
    if (n < 2) return 0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i), v = y[a + i];
        st += t;
        sy += v;
        stt += t * t;
        sty += t * v;
    }
    const double dn = static_cast<double>(n);
    return (dn * sty - st * sy) / (dn * stt - st * st);
}

}  // namespace detail

// Small-eta reduced dynamics of the price offsets lambda_i and the scaled
// production gaps z_i = eps_i / eta_+, with savings frozen at zero. Initial
// lambda_i are uniform on [-1, 1] and z_i = 0.
//
// The verdict is collapse when z-bar drifts upward over the second half of
// the run by more than `drift_tol` per step.
inline ReducedResult simulate_reduced(const ReducedParams& prm, RngStream& rng, double drift_tol = 1e-3) {
    if (prm.n_agents == 0) throw std::invalid_argument("simulate_reduced: n_agents must be positive");
    if (!(prm.eta_minus > 0)) throw std::invalid_argument("simulate_reduced: eta_minus must be positive");
    const double R = prm.eta_plus / prm.eta_minus;
    const double g = prm.gamma, b = prm.beta;
    const double beta_hat = 1.0 + b + b * b;
    const std::size_t n = prm.n_agents;

    std::vector<double> lam(n), z(n, 0.0);
    for (auto& l : lam) l = 2.0 * rng.uniform() - 1.0;

    ReducedResult res;
    res.lambda_bar.reserve(prm.horizon);
    res.z_bar.reserve(prm.horizon);
    for (std::size_t t = 0; t < prm.horizon; ++t) {
        double lbar = 0, zbar = 0;
        for (std::size_t i = 0; i < n; ++i) {
            lbar += lam[i];
            zbar += z[i];
        }
        lbar /= static_cast<double>(n);
        zbar /= static_cast<double>(n);
        res.lambda_bar.push_back(lbar);
        res.z_bar.push_back(zbar);

        const double threshold = b / (1.0 + b) * lbar;
        const double floor_z = std::max(zbar, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double l = lam[i];
            const double flux = l + b * (l - lbar) - 0.5 * g * beta_hat * l * l;
            const double xi = rng.uniform();
            if (l < threshold) {
                z[i] -= prm.unbounded ? -flux : std::min(-flux, floor_z);
                lam[i] = l + xi - 0.5 * g * xi * xi;
            } else {
                z[i] += flux / R;
                lam[i] = l - xi - 0.5 * g * xi * xi;
            }
        }
    }

    res.z_slope = detail::half_slope(res.z_bar);
    const std::size_t a = res.lambda_bar.size() / 2;
    double s = 0;
    for (std::size_t i = a; i < res.lambda_bar.size(); ++i) s += res.lambda_bar[i];
    res.lambda_bar_mean = res.lambda_bar.size() > a ? s / static_cast<double>(res.lambda_bar.size() - a) : 0.0;
    res.verdict = res.z_slope > drift_tol ? ReducedVerdict::collapse : ReducedVerdict::full_employment;
    return res;
}

}  // namespace tipping::theory
