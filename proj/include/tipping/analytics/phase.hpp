#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tipping::analytics {

enum class PhaseLabel { FU, RU, EC, FE };

inline const char* to_string(PhaseLabel p) {
    switch (p) {
        case PhaseLabel::FU: return "FU";
        case PhaseLabel::RU: return "RU";
        case PhaseLabel::EC: return "EC";
        case PhaseLabel::FE: return "FE";
    }
    return "?";
}

inline PhaseLabel phase_from_string(const std::string& s) {
    if (s == "FU") return PhaseLabel::FU;
    if (s == "RU") return PhaseLabel::RU;
    if (s == "EC") return PhaseLabel::EC;
    if (s == "FE") return PhaseLabel::FE;
    throw std::invalid_argument("unknown phase label '" + s + "'");
}

struct ClassifyThresholds {
    double fu_mean = 0.8;        // mean u at or above this is full unemployment
    double fe_mean = 0.05;       // mean u below this is full employment
    double ec_amplitude = 0.05;  // max(u) - min(u) needed for crises
    double excursion = 0.05;     // a crisis starts when u exceeds mean + excursion
    double rearm = 0.01;         // and ends when u falls back below mean + rearm
    int min_excursions = 2;
    std::size_t min_window = 1000;
};

struct Excursion {
    std::size_t start = 0;  // index in the full series
    double peak = 0;
};

struct PhaseStats {
    PhaseLabel label = PhaseLabel::FE;
    double mean_u = 0;
    double amplitude = 0;
    std::vector<Excursion> excursions;
};

namespace detail {

inline void check_window(std::size_t n, std::size_t burn_in, const ClassifyThresholds& th) {
    if (n <= burn_in + th.min_window)
        throw std::invalid_argument("series of length " + std::to_string(n) + " is too short for burn_in " + std::to_string(burn_in) +
                                    " (need more than burn_in + " + std::to_string(th.min_window) + " points)");
}

inline double window_mean(const std::vector<double>& u, std::size_t from) {
    double s = 0;
    for (std::size_t i = from; i < u.size(); ++i) s += u[i];
    return s / static_cast<double>(u.size() - from);
}

// Hysteresis detector: arms below mean + rearm, fires above mean + excursion.
// An excursion still open at the end of the window is counted.
inline std::vector<Excursion> find_excursions(const std::vector<double>& u, std::size_t from, double mean, const ClassifyThresholds& th) {
    std::vector<Excursion> out;
    bool armed = true;
    for (std::size_t i = from; i < u.size(); ++i) {
        if (armed) {
            if (u[i] > mean + th.excursion) {
                out.push_back({i, u[i]});
                armed = false;
            }
        } else {
            out.back().peak = std::max(out.back().peak, u[i]);
            if (u[i] < mean + th.rearm) armed = true;
        }
    }
    return out;
}

}  // namespace detail

inline PhaseStats classify_phase(const std::vector<double>& u, std::size_t burn_in, const ClassifyThresholds& th = {}) {
    detail::check_window(u.size(), burn_in, th);
    PhaseStats st;
    st.mean_u = detail::window_mean(u, burn_in);
    const auto [mn, mx] = std::minmax_element(u.begin() + static_cast<long>(burn_in), u.end());
    st.amplitude = *mx - *mn;
    st.excursions = detail::find_excursions(u, burn_in, st.mean_u, th);
    if (st.mean_u >= th.fu_mean) st.label = PhaseLabel::FU;
    else if (st.amplitude > th.ec_amplitude && static_cast<int>(st.excursions.size()) >= th.min_excursions) st.label = PhaseLabel::EC;
    else if (st.mean_u < th.fe_mean) st.label = PhaseLabel::FE;
    else st.label = PhaseLabel::RU;
    return st;
}

struct CrisisStats {
    int count = 0;
    double mean_amplitude = 0;  // mean of (peak - mean u) over crises
    double mean_interval = 0;   // mean spacing between crisis onsets; 0 with fewer than two
};

// Empty stats unless the window classifies as EC.
inline CrisisStats crisis_stats(const std::vector<double>& u, std::size_t burn_in, const ClassifyThresholds& th = {}) {
    const PhaseStats st = classify_phase(u, burn_in, th);
    CrisisStats cs;
    if (st.label != PhaseLabel::EC) return cs;
    cs.count = static_cast<int>(st.excursions.size());
    double amp = 0;
    for (const auto& e : st.excursions) amp += e.peak - st.mean_u;
    cs.mean_amplitude = amp / cs.count;
    if (cs.count >= 2)
        cs.mean_interval = static_cast<double>(st.excursions.back().start - st.excursions.front().start) / (cs.count - 1);
    return cs;
}

}  // namespace tipping::analytics
