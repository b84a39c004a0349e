#pragma once

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace tipping::theory {

// Piecewise-constant density over [lo, hi]: `mass[i]` is the density value in
// cell i, so that sum(mass) * dx() is the total probability.
struct DensityGrid {
    double lo = -1.6;
    double hi = 1.6;
    std::size_t n_bins = 2001;
    std::vector<double> mass;
    bool negative_clipped = false;  // stationary_density had to clip P < 0

    DensityGrid() : mass(n_bins, 0.0) {}
    DensityGrid(double lo_, double hi_, std::size_t n) : lo(lo_), hi(hi_), n_bins(n), mass(n, 0.0) {}

    double dx() const { return (hi - lo) / static_cast<double>(n_bins); }
    double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * dx(); }

    double total() const {
        double s = 0;
        for (double m : mass) s += m;
        return s * dx();
    }

    double mean() const {
        double s = 0;
        for (std::size_t i = 0; i < n_bins; ++i) s += center(i) * mass[i];
        return s * dx() / total();
    }

    void normalize() {
        const double t = total();
        if (t != 0)
            for (double& m : mass) m /= t;
    }

    template <class F>
    static DensityGrid sample(F&& f, double lo = -1.6, double hi = 1.6, std::size_t n = 2001) {
        DensityGrid g(lo, hi, n);
        for (std::size_t i = 0; i < n; ++i) g.mass[i] = f(g.center(i));
        return g;
    }
};

inline double l1_distance(const DensityGrid& a, const DensityGrid& b) {
    if (a.n_bins != b.n_bins) throw std::invalid_argument("l1_distance: grids differ");
    double s = 0;
    for (std::size_t i = 0; i < a.n_bins; ++i) s += std::abs(a.mass[i] - b.mass[i]);
    return s * a.dx();
}

inline double tent(double x) { return std::max(0.0, 1.0 - std::abs(x)); }

// Discrete transport kernel. A cell of width dx shifted by a random amount s
// with density g lands in cell offset m with weight
//   w_m = integral g(s) * hat(s/dx - m) ds,   hat(x) = max(0, 1 - |x|),
// which is exact for piecewise-constant densities. The weights sum to one.
class ShiftKernel {
public:
    ShiftKernel(const std::function<double(double)>& g, double s_max, double dx) {
        const auto n = static_cast<std::size_t>(std::ceil(s_max / dx)) + 2;
        w_.assign(n, 0.0);
        using GL = boost::math::quadrature::gauss<double, 10>;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double a = static_cast<double>(k) * dx;
            if (a >= s_max) break;
            const double b = std::min(static_cast<double>(k + 1) * dx, s_max);
            // On [k dx, (k+1) dx] the hat functions for m = k and m = k + 1 are
            // linear: 1 - (s/dx - k) and s/dx - k.
            const double lo_part = GL::integrate([&](double s) { return g(s) * (1.0 - (s / dx - static_cast<double>(k))); }, a, b);
            const double hi_part = GL::integrate([&](double s) { return g(s) * (s / dx - static_cast<double>(k)); }, a, b);
            w_[k] += lo_part;
            w_[k + 1] += hi_part;
        }
        double sum = 0;
        for (double x : w_) sum += x;
        for (double& x : w_) x /= sum;  // removes quadrature round-off only
    }

    const std::vector<double>& weights() const { return w_; }

private:
    std::vector<double> w_;
};

// Shift densities of the price offset dynamics. Mass above zero moves down by
// s = xi + gamma xi^2 / 2, mass below zero moves up by s = xi - gamma xi^2 / 2,
// with xi uniform on [0, 1].
inline ShiftKernel down_kernel(double gamma, double dx) {
    if (gamma == 0) return ShiftKernel([](double) { return 1.0; }, 1.0, dx);
    return ShiftKernel([gamma](double s) { return 1.0 / std::sqrt(1.0 + 2.0 * gamma * s); }, 1.0 + gamma / 2, dx);
}

inline ShiftKernel up_kernel(double gamma, double dx) {
    if (gamma == 0) return ShiftKernel([](double) { return 1.0; }, 1.0, dx);
    return ShiftKernel([gamma](double s) { return 1.0 / std::sqrt(1.0 - 2.0 * gamma * s); }, 1.0 - gamma / 2, dx);
}

class MasterOperator {
public:
    MasterOperator(double gamma, double dx) : gamma_(gamma), down_(down_kernel(gamma, dx)), up_(up_kernel(gamma, dx)) {}

    // One step. Works on signed functions as well as densities. The cell that
    // contains zero is split by the fraction of it on either side.
    DensityGrid apply(const DensityGrid& in) const {
        DensityGrid out(in.lo, in.hi, in.n_bins);
        const auto n = static_cast<long>(in.n_bins);
        const double zero_pos = (0.0 - in.lo) / in.dx() - 0.5;  // fractional index of lambda = 0
        const auto& wd = down_.weights();
        const auto& wu = up_.weights();
        const auto nd = static_cast<long>(wd.size());
        const auto nu = static_cast<long>(wu.size());
        for (long j = 0; j < n; ++j) {
            const double m = in.mass[static_cast<std::size_t>(j)];
            if (m == 0) continue;
            // Fraction of the cell lying above zero.
            const double down_share = std::clamp(static_cast<double>(j) - zero_pos + 0.5, 0.0, 1.0);
            const double md = m * down_share, mu = m - md;
            if (md != 0) {
                for (long k = 0; k < nd; ++k) {
                    const long d = j - k;
                    if (d < 0) {
                        lost_ += md * wd[static_cast<std::size_t>(k)];
                        continue;
                    }
                    out.mass[static_cast<std::size_t>(d)] += md * wd[static_cast<std::size_t>(k)];
                }
            }
            if (mu != 0) {
                for (long k = 0; k < nu; ++k) {
                    const long d = j + k;
                    if (d >= n) {
                        lost_ += mu * wu[static_cast<std::size_t>(k)];
                        continue;
                    }
                    out.mass[static_cast<std::size_t>(d)] += mu * wu[static_cast<std::size_t>(k)];
                }
            }
        }
        return out;
    }

    double gamma() const { return gamma_; }
    double lost_mass() const { return lost_; }

private:
    double gamma_;
    ShiftKernel down_, up_;
    mutable double lost_ = 0;
};

// One application of the gamma = 0 operator. The input must vanish outside
// [-1, 1].
inline DensityGrid apply_L0(const DensityGrid& in) {
    for (std::size_t i = 0; i < in.n_bins; ++i) {
        const double x = in.center(i);
        if ((x < -1.0 - in.dx() || x > 1.0 + in.dx()) && in.mass[i] != 0)
            throw std::domain_error("apply_L0: input not supported in [-1, 1]");
    }
    return MasterOperator(0.0, in.dx()).apply(in);
}

inline double stationary_formula(double x, double gamma, double beta) {
    const double s = x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0);
    return 1.0 - std::abs(x + beta * gamma / 4.0) - gamma / 2.0 * s * x * x;
}

// First-order stationary density, clipped at zero and renormalized. The
// `negative_clipped` flag reports a non-negligible negative part.
inline DensityGrid stationary_density(double gamma, double beta, double lo = -1.6, double hi = 1.6, std::size_t n = 2001) {
    DensityGrid g(lo, hi, n);
    double neg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.center(i);
        double p = stationary_formula(x, gamma, beta);
        const bool inside = std::abs(x) <= 2.0;
        if (p < 0) {
            // The formula turns negative outside its support; only negative
            // values between the two roots nearest the origin count as a defect.
            if (inside && std::abs(x) < 1.0 - gamma) neg -= p;
            p = 0;
        }
        g.mass[i] = p;
    }
    g.negative_clipped = neg * g.dx() > 1e-6;
    g.normalize();
    return g;
}

struct PerturbativeResult {
    double distance = 0;
    int iterations = 0;
    DensityGrid density;
};

// Iterates the full gamma > 0 master operator from the tent until the L1 change
// per step drops below `tol`; returns the L1 distance to the first-order
// solution 1 - |x| - (gamma/2) sign(x) x^2 (clipped at zero).
inline PerturbativeResult perturbative_check(double gamma, double tol = 1e-13, int max_iter = 10000) {
    if (gamma < 0 || gamma > 0.2) throw std::domain_error("perturbative_check: gamma must lie in [0, 0.2]");
    DensityGrid p = DensityGrid::sample(tent);
    p.normalize();
    MasterOperator op(gamma, p.dx());
    PerturbativeResult r;
    for (int it = 1; it <= max_iter; ++it) {
        DensityGrid next = op.apply(p);
        const double change = l1_distance(next, p);
        p = std::move(next);
        if (change < tol) {
            r.iterations = it;
            DensityGrid target = DensityGrid::sample([gamma](double x) { return std::max(0.0, stationary_formula(x, gamma, 0.0)); });
            r.distance = l1_distance(p, target);
            r.density = std::move(p);
            return r;
        }
    }
    throw std::runtime_error("perturbative_check: no convergence within max_iter iterations");
}

}  // namespace tipping::theory
