#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tipping::analytics {

struct EquilibrationResult {
    std::size_t step = 0;
    bool censored = false;  // the smoothed series never settled before the final window
    double final_mean = 0;
};

// First step after which the trailing moving average of u (width `smoothing`)
// stays within +-tolerance of the mean over the final window (the last
// `final_fraction` of the series).
inline EquilibrationResult equilibration_time(const std::vector<double>& u, double tolerance, std::size_t smoothing = 100,
                                              double final_fraction = 0.1) {
    if (u.empty()) throw std::invalid_argument("equilibration_time: empty series");
    if (!(tolerance > 0)) throw std::invalid_argument("equilibration_time: tolerance must be positive");
    const std::size_t n = u.size();
    const std::size_t final_len = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(final_fraction * static_cast<double>(n))));
    const std::size_t final_start = n - final_len;
    EquilibrationResult r;
    for (std::size_t i = final_start; i < n; ++i) r.final_mean += u[i];
    r.final_mean /= static_cast<double>(final_len);

    smoothing = std::max<std::size_t>(1, smoothing);
    std::vector<double> sm(n);
    double acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += u[i];
        if (i >= smoothing) acc -= u[i - smoothing];
        sm[i] = acc / static_cast<double>(std::min(i + 1, smoothing));
    }
    std::size_t settle = 0;
    for (std::size_t i = n; i-- > 0;) {
        if (std::abs(sm[i] - r.final_mean) > tolerance) {
            settle = i + 1;
            break;
        }
    }
    r.step = settle;
    r.censored = settle >= final_start && settle > 0;
    return r;
}

}  // namespace tipping::analytics
