// Runs one Mark 0 economy on each side of the critical line and prints the
// phase label, mean unemployment and oscillation period of each.

#include <iostream>

#include "tipping/analytics/phase.hpp"
#include "tipping/analytics/spectrum.hpp"
#include "tipping/run.hpp"
#include "tipping/theory/critical_line.hpp"

int main() {
    using namespace tipping;
    SimConfig cfg = default_config(Engine::mark0);
    cfg.beta = 2;
    cfg.gamma_p = 0.1;
    cfg.horizon = 12000;
    cfg.burn_in = 4000;

    const double rc = theory::critical_R(cfg.gamma_p, cfg.beta, theory::CriticalMethod::closed);
    std::cout << "closed-form critical R = " << rc << "\n";

    for (double R : {0.5, 2.0}) {
        cfg.eta_plus = R * cfg.eta_minus;
        const RunResult r = mark0::run_mark0(cfg);
        const auto u = r.u_series();
        const auto st = analytics::classify_phase(u, static_cast<std::size_t>(cfg.burn_in));
        const auto sp = analytics::power_spectrum(u, static_cast<std::size_t>(cfg.burn_in));
        std::cout << "R = " << R << ": " << analytics::to_string(st.label) << ", mean u = " << st.mean_u << ", peak period = ";
        if (auto p = sp.peak_period()) std::cout << *p << "\n";
        else std::cout << "none\n";
    }
}
