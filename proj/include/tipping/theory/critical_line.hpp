#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

#include "density.hpp"

namespace tipping::theory {

enum class CriticalMethod { closed, numeric };

inline CriticalMethod critical_method_from_string(const std::string& s) {
    if (s == "closed") return CriticalMethod::closed;
    if (s == "numeric") return CriticalMethod::numeric;
    throw std::invalid_argument("unknown critical_R method '" + s + "' (expected closed|numeric)");
}

namespace detail {

template <class F>
double integrate(F&& f, double a, double b) {
    if (b <= a) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}

}  // namespace detail

// R_c = eta_+ / eta_- on the boundary between full unemployment and full
// employment. `closed` is the first-order expansion; `numeric` evaluates the
// ratio of the up- and down-flux integrals against the clipped stationary
// density.
inline double critical_R(double gamma, double beta, CriticalMethod method) {
    if (gamma < 0 || beta < 0) throw std::domain_error("critical_R: gamma and beta must be non-negative");
    if (!(gamma < 4.0 / (beta + 2.0)))
        throw std::domain_error("critical_R: requires gamma < 4/(beta+2), got gamma=" + std::to_string(gamma) + " beta=" + std::to_string(beta));
    if (method == CriticalMethod::closed) return 1.0 - gamma * (2.0 + beta) * (2.0 + beta) / (2.0 * (1.0 + beta));
    if (gamma == 0) return 1.0;

    const double beta_hat = 1.0 + beta + beta * beta;
    const double split = -gamma * beta / 4.0;
    auto p = [&](double x) { return std::max(0.0, stationary_formula(x, gamma, beta)); };

    // Support of the clipped density: both outer roots lie within |x| < 2.
    const double lo = -2.0, hi = 2.0;
    const double norm = detail::integrate(p, lo, split) + detail::integrate(p, split, 0.0) + detail::integrate(p, 0.0, hi);
    const double mean = (detail::integrate([&](double x) { return x * p(x); }, lo, split) +
                         detail::integrate([&](double x) { return x * p(x); }, split, 0.0) +
                         detail::integrate([&](double x) { return x * p(x); }, 0.0, hi)) /
                        norm;

    auto flux = [&](double x) { return x + beta * (x - mean) - 0.5 * gamma * beta_hat * x * x; };
    const double up = detail::integrate([&](double x) { return p(x) * flux(x); }, split, 0.0) +
                      detail::integrate([&](double x) { return p(x) * flux(x); }, 0.0, hi);
    const double down = detail::integrate([&](double x) { return -p(x) * flux(x); }, lo, split);
    if (!(down > 0)) throw std::runtime_error("critical_R: degenerate down-flux integral");
    return up / down;
}

}  // namespace tipping::theory
