#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tipping/analytics/phase.hpp"
#include "tipping/analytics/spectrum.hpp"
#include "tipping/io/config_file.hpp"
#include "tipping/io/csv.hpp"
#include "tipping/io/manifest.hpp"
#include "tipping/io/sweep_io.hpp"
#include "tipping/run.hpp"
#include "tipping/sweep/sweep.hpp"
#include "tipping/theory/critical_line.hpp"
#include "tipping/theory/density.hpp"
#include "tipping/theory/oscillator.hpp"
#include "tipping/theory/reduced.hpp"
#include "tipping/theory/representative.hpp"

namespace {

using namespace tipping;
using detail::fmt_double;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string config_key_help() {
    std::ostringstream os;
    os << "Config keys (file grammar: one 'key = value' per line, '#' comments):\n";
    for (const auto& f : config_fields()) {
        std::string engines = f.mark0 && f.mark1 ? "both" : (f.mark0 ? "mark0" : "mark1");
        os << "  " << f.name << "  [" << f.range << "; " << engines << "]\n      " << f.help << "\n";
        const SimConfig d0 = default_config(Engine::mark0), d1 = default_config(Engine::mark1);
        const auto v0 = f.get(d0), v1 = f.get(d1);
        os << "      default: " << (v0 ? *v0 : "unset");
        if (v0 != v1) os << " (mark1: " << (v1 ? *v1 : "unset") << ")";
        os << "\n";
    }
    return os.str();
}

unsigned workers_default() {
    if (const char* env = std::getenv("TIPPING_ABM_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return static_cast<unsigned>(w);
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("TIPPING_ABM_WORKERS must be a positive integer, got '") + env + "'");
    }
    return sweep::default_workers();
}

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> steps;
    std::string out;
    std::vector<std::string> sets;
};

SimConfig build_config(Engine engine, const RunOptions& o) {
    std::vector<std::string> notices;
    SimConfig cfg = o.config.empty() ? default_config(engine) : io::load_config(o.config, engine, &notices);
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
        io::apply_config_key(cfg, engine, {io::trim(s.substr(0, eq)), io::trim(s.substr(eq + 1)), 0}, "--set", &notices);
    }
    if (o.seed) cfg.seed = *o.seed;
    if (o.steps) cfg.horizon = *o.steps;
    for (const auto& n : notices) std::cerr << n << '\n';
    validate(cfg, engine);
    return cfg;
}

void emit_run(const RunResult& r, const std::string& out) {
    if (out.empty()) {
        io::write_series_csv(std::cout, r);
    } else {
        io::write_run(out, r);
        std::cerr << "wrote " << (std::filesystem::path(out) / io::kSeriesFile).string() << " and "
                  << (std::filesystem::path(out) / io::kManifestFile).string() << '\n';
    }
    double mean = 0;
    std::size_t n = 0;
    for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(0, r.manifest.config.burn_in)); i < r.series.size(); ++i, ++n)
        mean += r.series[i].u;
    std::cerr << to_string(r.manifest.engine) << ": " << r.series.size() << " steps, termination=" << to_string(r.manifest.termination);
    if (n > 0) std::cerr << ", mean u after burn-in=" << fmt_double(mean / static_cast<double>(n));
    std::cerr << '\n';
}

void add_run_command(CLI::App& app, const std::string& name, Engine engine, RunOptions& o) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + (engine == Engine::mark0 ? "Mark 0" : "Mark I+") + " engine");
    cmd->add_option("--config", o.config, "config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "override the seed");
    cmd->add_option("--steps", o.steps, "override the horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory for series.csv and manifest.json (default: CSV to stdout)");
    cmd->add_option("--set", o.sets, "override a config key, key=value (repeatable)");
    cmd->callback([engine, &o] { emit_run(run_engine(engine, build_config(engine, o)), o.out); });
}

void print_verdict(const std::vector<double>& u, std::size_t burn_in) {
    const auto st = analytics::classify_phase(u, burn_in);
    const auto cs = analytics::crisis_stats(u, burn_in);
    std::optional<double> period;
    if (u.size() > burn_in && u.size() - burn_in >= analytics::SpectrumOptions{}.min_length)
        period = analytics::power_spectrum(u, burn_in).peak_period();
    std::cout << "label=" << analytics::to_string(st.label) << " mean_u=" << fmt_double(st.mean_u) << " amplitude=" << fmt_double(st.amplitude)
              << " peak_period=" << (period ? fmt_double(*period) : "none") << " crises=" << cs.count
              << " crisis_amplitude=" << fmt_double(cs.mean_amplitude) << " crisis_interval=" << fmt_double(cs.mean_interval) << '\n';
}

void add_theory_commands(CLI::App& app) {
    auto* th = app.add_subcommand("theory", "analytical oracles");
    th->require_subcommand(1);

    static double gamma = 0.05, beta = 0, eta_plus = 0.01, eta_minus = 0.01, C = 0.6;
    static std::size_t n = 10000, steps = 4000;
    static std::uint64_t seed = 1;
    static bool unbounded = false, onset = false;
    static std::string out;

    auto* cr = th->add_subcommand("critical-r", "closed-form and numeric critical R");
    cr->add_option("--gamma-p", gamma)->required();
    cr->add_option("--beta", beta);
    cr->callback([] {
        std::cout << "closed=" << fmt_double(theory::critical_R(gamma, beta, theory::CriticalMethod::closed))
                  << " numeric=" << fmt_double(theory::critical_R(gamma, beta, theory::CriticalMethod::numeric)) << '\n';
    });

    auto* de = th->add_subcommand("density", "first-order stationary density as CSV (lambda,density)");
    de->add_option("--gamma-p", gamma)->required();
    de->add_option("--beta", beta);
    de->add_option("--out", out, "CSV file (default stdout)");
    de->callback([] {
        const auto g = theory::stationary_density(gamma, beta);
        std::ofstream f;
        std::ostream& os = out.empty() ? std::cout : (f.open(out), f);
        if (!os) throw std::runtime_error("cannot write " + out);
        os << "lambda,density\n";
        for (std::size_t i = 0; i < g.n_bins; ++i) os << fmt_double(g.center(i)) << ',' << fmt_double(g.mass[i]) << '\n';
        if (g.negative_clipped) std::cerr << "warning: density was negative on a non-negligible set and was clipped\n";
        std::cerr << "mean=" << fmt_double(g.mean()) << '\n';
    });

    auto* pe = th->add_subcommand("perturbative", "L1 distance between the iterated and first-order densities");
    pe->add_option("--gamma-p", gamma)->required();
    pe->callback([] {
        const auto r = theory::perturbative_check(gamma);
        std::cout << "distance=" << fmt_double(r.distance) << " iterations=" << r.iterations << '\n';
    });

    auto* re = th->add_subcommand("reduced", "simulate the reduced (lambda, z) dynamics");
    re->add_option("--n", n);
    re->add_option("--gamma-p", gamma);
    re->add_option("--beta", beta);
    re->add_option("--eta-plus", eta_plus);
    re->add_option("--eta-minus", eta_minus);
    re->add_option("--steps", steps);
    re->add_option("--seed", seed);
    re->add_flag("--unbounded", unbounded, "drop the full-employment floor");
    re->callback([] {
        RngStream rng(seed);
        const auto r = theory::simulate_reduced({n, gamma, beta, eta_plus, eta_minus, steps, unbounded}, rng);
        std::cout << "verdict=" << theory::to_string(r.verdict) << " z_slope=" << fmt_double(r.z_slope)
                  << " lambda_bar=" << fmt_double(r.lambda_bar_mean) << " predicted_lambda_bar=" << fmt_double(-gamma * (1 + beta) / 4) << '\n';
    });

    auto* os = th->add_subcommand("oscillator", "agent-level schematic oscillator");
    os->add_option("--n", n);
    os->add_option("--C", C)->required();
    os->add_option("--steps", steps);
    os->add_option("--seed", seed);
    os->callback([] {
        RngStream rng(seed);
        const auto r = theory::simulate_schematic_oscillator(n, C, steps, rng);
        std::cout << "verdict=" << (r.sustained ? "sustained" : "damped") << " amplitude=" << fmt_double(r.amplitude)
                  << " range_q2=" << fmt_double(r.range_q2) << " range_q4=" << fmt_double(r.range_q4) << '\n';
    });

    auto* ms = th->add_subcommand("moment-simple", "two-variable moment map");
    ms->add_option("--C", C);
    ms->add_option("--steps", steps);
    ms->add_flag("--onset", onset, "bisect for the onset of non-convergence instead");
    ms->callback([] {
        if (onset) std::cout << "onset=" << fmt_double(theory::moment_map_simple_onset()) << '\n';
        else std::cout << "verdict=" << theory::to_string(theory::moment_map_simple(C, steps).verdict) << '\n';
    });

    auto* ml = th->add_subcommand("moment-linear", "perturbative linear moment map");
    ml->add_option("--C", C);
    ml->add_option("--steps", steps);
    ml->add_flag("--onset", onset, "bisect for the onset of sustained oscillations instead");
    ml->callback([] {
        if (onset) {
            std::cout << "onset=" << fmt_double(theory::moment_map_linear_onset()) << '\n';
        } else {
            const auto r = theory::moment_map_linear(C, steps);
            std::cout << "verdict=" << theory::to_string(r.verdict) << " growth_rate=" << fmt_double(r.growth_rate) << '\n';
        }
    });

    auto* rp = th->add_subcommand("representative", "single-firm reduction");
    rp->add_option("--eta-plus", eta_plus);
    rp->add_option("--eta-minus", eta_minus);
    rp->add_option("--gamma-p", gamma);
    rp->add_option("--steps", steps);
    rp->add_option("--seed", seed);
    rp->add_flag("--onset", onset, "locate the transition in R instead");
    rp->callback([] {
        if (onset) {
            std::cout << "transition_R=" << fmt_double(theory::representative_transition(gamma, eta_minus, steps, seed))
                      << " closed=" << fmt_double(theory::critical_R(gamma, 0, theory::CriticalMethod::closed)) << '\n';
        } else {
            RngStream rng(seed);
            theory::RepresentativeParams p;
            p.eta_plus = eta_plus;
            p.eta_minus = eta_minus;
            p.gamma = gamma;
            p.horizon = steps;
            const auto r = theory::representative_firm(p, rng);
            std::cout << "verdict=" << theory::to_string(r.verdict) << " growth_rate=" << fmt_double(r.growth_rate) << '\n';
        }
    });
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Agent-based macroeconomic tipping-point laboratory (Mark 0 and Mark I+)"};
    app.require_subcommand(1);
    app.footer(config_key_help());

    RunOptions o0, o1;
    add_run_command(app, "run-mark0", Engine::mark0, o0);
    add_run_command(app, "run-mark1", Engine::mark1, o1);

    std::string spec_path, sweep_out;
    std::optional<unsigned> workers;
    auto* sw = app.add_subcommand("sweep", "phase-diagram sweep over one or two parameters");
    sw->add_option("--spec", spec_path, "sweep spec file")->required()->check(CLI::ExistingFile);
    sw->add_option("--out", sweep_out, "output directory")->required();
    sw->add_option("--workers", workers, "worker threads (default: $TIPPING_ABM_WORKERS or core count)")->check(CLI::PositiveNumber);
    sw->callback([&] {
        std::vector<std::string> notices;
        const auto spec = io::load_sweep_spec(spec_path, &notices);
        for (const auto& n : notices) std::cerr << n << '\n';
        const unsigned w = workers ? *workers : workers_default();
        const auto map = sweep::run_sweep(spec, w);
        io::write_sweep(sweep_out, spec, map);
        std::cerr << "wrote " << map.cells.size() << " cells to " << sweep_out << '\n';
    });

    add_theory_commands(app);

    std::string csv_path;
    std::size_t burn_in = 10000;
    auto* cl = app.add_subcommand("classify", "classify a series.csv and print a one-line verdict");
    cl->add_option("csv", csv_path, "series CSV")->required()->check(CLI::ExistingFile);
    cl->add_option("--burn-in", burn_in, "steps to discard");
    cl->callback([&] {
        std::ifstream f(csv_path);
        const auto table = io::read_numeric_csv(f);
        print_verdict(table.column("u"), burn_in);
    });

    std::string manifest_path, replay_out;
    auto* rp = app.add_subcommand("replay", "re-run a manifest and emit its CSV");
    rp->add_option("manifest", manifest_path, "manifest.json")->required()->check(CLI::ExistingFile);
    rp->add_option("--out", replay_out, "output directory (default: CSV to stdout)");
    rp->callback([&] {
        const auto in = io::load_manifest(manifest_path);
        emit_run(run_engine(in.engine, in.config), replay_out);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}
