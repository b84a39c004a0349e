#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tipping::analytics {

struct SpectrumOptions {
    std::size_t min_length = 2048;     // post-burn-in points required
    std::size_t max_segment = 1024;
    std::size_t min_segments = 8;
    double global_factor = 3.0;        // peak power over the median of the whole spectrum
    double local_factor = 10.0;        // peak power over the median of its octave [f/2, 2f]
    std::optional<std::pair<double, double>> band;  // restrict peaks to this frequency range
};

struct SpectrumSummary {
    std::vector<double> frequencies;  // cycles per step, in (0, 0.5]
    std::vector<double> power;
    std::optional<double> peak_frequency;
    double peak_significance = 0;     // power over octave background at the peak, or the largest such ratio if none
    std::size_t segment_length = 0;
    std::size_t segments = 0;

    std::optional<double> peak_period() const {
        if (!peak_frequency) return std::nullopt;
        return 1.0 / *peak_frequency;
    }
};

namespace detail {

// FFTW planning is not thread-safe; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwPlan {
    fftw_plan plan = nullptr;
    double* in = nullptr;
    fftw_complex* out = nullptr;

    explicit FftwPlan(std::size_t n) {
        std::lock_guard lock(fftw_planner_mutex());
        in = fftw_alloc_real(n);
        out = fftw_alloc_complex(n / 2 + 1);
        if (!in || !out) throw std::bad_alloc();
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("fftw: could not create plan");
    }
    ~FftwPlan() {
        std::lock_guard lock(fftw_planner_mutex());
        if (plan) fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0;
    const auto mid = v.begin() + static_cast<long>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2) return *mid;
    const double hi = *mid;
    return 0.5 * (hi + *std::max_element(v.begin(), mid));
}

// Removes the least-squares line from x.
inline void detrend(std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i);
        st += t;
        sx += x[i];
        stt += t * t;
        stx += t * x[i];
    }
    const double den = n * stt - st * st;
    const double slope = den != 0 ? (n * stx - st * sx) / den : 0.0;
    const double icpt = (sx - slope * st) / n;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= icpt + slope * static_cast<double>(i);
}

}  // namespace detail

// Welch periodogram of series[burn_in:], with Hann-windowed, linearly
// detrended segments overlapping by half. A peak is reported at the highest
// local maximum exceeding both global_factor times the median power and
// local_factor times the median over its octave (excluding the two bins
// either side of it). The octave test rejects the low-frequency hump of red
// noise, which a global median alone would not.
inline SpectrumSummary power_spectrum(const std::vector<double>& series, std::size_t burn_in, const SpectrumOptions& opt = {}) {
    if (burn_in >= series.size() || series.size() - burn_in < opt.min_length)
        throw std::invalid_argument("power_spectrum: need at least " + std::to_string(opt.min_length) + " points after burn_in");
    const std::size_t len = series.size() - burn_in;

    std::size_t seg = 16;
    while (seg * 2 <= opt.max_segment && 2 * (len / (seg * 2)) - 1 >= opt.min_segments) seg *= 2;
    const std::size_t hop = seg / 2;
    const std::size_t n_seg = (len - seg) / hop + 1;

    std::vector<double> window(seg);
    double wss = 0;
    for (std::size_t i = 0; i < seg; ++i) {
        window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(seg));
        wss += window[i] * window[i];
    }

    const std::size_t n_freq = seg / 2;
    SpectrumSummary s;
    s.segment_length = seg;
    s.segments = n_seg;
    s.frequencies.resize(n_freq);
    s.power.assign(n_freq, 0.0);
    for (std::size_t k = 1; k <= n_freq; ++k) s.frequencies[k - 1] = static_cast<double>(k) / static_cast<double>(seg);

    detail::FftwPlan plan(seg);
    std::vector<double> buf(seg);
    for (std::size_t j = 0; j < n_seg; ++j) {
        const std::size_t a = burn_in + j * hop;
        std::copy(series.begin() + static_cast<long>(a), series.begin() + static_cast<long>(a + seg), buf.begin());
        detail::detrend(buf);
        for (std::size_t i = 0; i < seg; ++i) plan.in[i] = buf[i] * window[i];
        fftw_execute(plan.plan);
        for (std::size_t k = 1; k <= n_freq; ++k) {
            const double re = plan.out[k][0], im = plan.out[k][1];
            s.power[k - 1] += (re * re + im * im) / wss;
        }
    }
    for (double& p : s.power) p /= static_cast<double>(n_seg);

    const double global_med = detail::median(s.power);
    auto local_background = [&](std::size_t i) {
        const std::size_t k = i + 1;  // bin number
        const std::size_t lo = std::max<std::size_t>(1, k / 2), hi = std::min(n_freq, 2 * k);
        std::vector<double> v;
        for (std::size_t b = lo; b <= hi; ++b)
            if (b + 2 < k || b > k + 2) v.push_back(s.power[b - 1]);
        return detail::median(std::move(v));
    };

    double best_power = -1, max_sig = 0;
    for (std::size_t i = 0; i < n_freq; ++i) {
        const double f = s.frequencies[i];
        if (opt.band && (f < opt.band->first || f > opt.band->second)) continue;
        const double p = s.power[i];
        const bool local_max = (i == 0 || p > s.power[i - 1]) && (i + 1 == n_freq || p >= s.power[i + 1]);
        if (!local_max) continue;
        const double bg = local_background(i);
        const double sig = bg > 0 ? p / bg : 0.0;
        max_sig = std::max(max_sig, sig);
        if (p > opt.global_factor * global_med && sig > opt.local_factor && p > best_power) {
            best_power = p;
            s.peak_frequency = f;
            s.peak_significance = sig;
        }
    }
    if (!s.peak_frequency) s.peak_significance = max_sig;
    return s;
}

}  // namespace tipping::analytics
