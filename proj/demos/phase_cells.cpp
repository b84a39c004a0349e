// A coarse R x Theta phase map of Mark 0, printed as a label grid.
// Usage: demo_phase_cells [workers]

#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "tipping/sweep/sweep.hpp"

int main(int argc, char** argv) {
    using namespace tipping;
    sweep::SweepSpec spec;
    spec.engine = Engine::mark0;
    spec.base = default_config(Engine::mark0);
    spec.base.n_firms = 500;
    spec.base.horizon = 8000;
    spec.base.burn_in = 4000;
    spec.base.eta_minus = 0.1;
    spec.axes = {{"R", sweep::linspace(0.5, 3.0, 6)}, {"theta", sweep::logspace(0.1, 20, 5)}};
    spec.seeds_per_cell = 3;

    const unsigned workers = argc > 1 ? static_cast<unsigned>(std::atoi(argv[1])) : sweep::default_workers();
    const auto map = sweep::run_sweep(spec, workers);

    std::cout << std::setw(9) << "theta\\R";
    for (double x : map.x_values) std::cout << std::setw(6) << std::setprecision(2) << x;
    std::cout << "\n";
    for (std::size_t j = map.ny(); j-- > 0;) {
        std::cout << std::setw(9) << std::setprecision(3) << map.y_values[j];
        for (std::size_t i = 0; i < map.nx(); ++i) {
            const auto& l = map.at(i, j).label;
            std::cout << std::setw(6) << (l ? analytics::to_string(*l) : "NA");
        }
        std::cout << "\n";
    }
}
