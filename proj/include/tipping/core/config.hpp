#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tipping {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Engine { mark0, mark1 };

inline std::string_view to_string(Engine e) { return e == Engine::mark0 ? "mark0" : "mark1"; }

inline Engine engine_from_string(std::string_view s) {
    if (s == "mark0") return Engine::mark0;
    if (s == "mark1") return Engine::mark1;
    throw ConfigError("unknown engine '" + std::string(s) + "' (expected mark0 or mark1)");
}

struct PolicyRule {
    double u_trigger = 0.1;
    double theta_high = 10.0;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimConfig {
    std::size_t n_firms = 1000;
    double mu = 1.0;
    double c = 0.5;
    double beta = 0.0;
    double gamma_p = 0.05;
    double gamma_y = 0.1;
    double gamma_w = 0.0;
    double eta_plus = 0.3;
    double eta_minus = 0.1;
    double delta = 0.02;
    std::optional<double> delta_plus;
    double theta = kInf;
    double phi = 0.1;
    double f = 1.0;
    double rho0 = 0.0;
    double tau = 0.05;
    int m_goods = 3;
    std::int64_t horizon = 20000;
    std::int64_t burn_in = 10000;
    std::uint64_t seed = 1;
    std::optional<PolicyRule> policy;

    // Mark 0: revived firms restart at Y = mu*u*xi when true, Y = mu*u otherwise.
    bool revival_random = true;
    // Mark I+ extras.
    double markup = 0.0;
    double initial_liquidity = 50.0;
    bool rate_noise = false;

    double R() const { return eta_plus / eta_minus; }
};

// Parameter defaults. Mark 0 follows the basic phase-diagram setting (desk
// scale N_F = 1000); Mark I+ follows the class defaults of its pseudo-code.
inline SimConfig default_config(Engine e) {
    SimConfig c;
    if (e == Engine::mark1) {
        c.c = 0.8;
        c.gamma_p = 0.1;
        c.gamma_y = 0.1;
        c.delta = 0.2;
        c.tau = 0.05;
        c.m_goods = 3;
        c.mu = 10.0;  // households per firm
        c.horizon = 40000;
        c.burn_in = 20000;
        c.rho0 = 0.0;
    }
    return c;
}

namespace detail {

inline std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view key, std::string_view s) {
    std::string t(s);
    if (t == "inf" || t == "infinity" || t == "Inf" || t == "INF") return kInf;
    double v = 0;
    auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    if (r.ec != std::errc() || r.ptr != t.data() + t.size())
        throw ConfigError(std::string(key) + ": cannot parse '" + t + "' as a number");
    return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view s) {
    Int v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError(std::string(key) + ": cannot parse '" + std::string(s) + "' as an integer");
    return v;
}

inline bool parse_bool(std::string_view key, std::string_view s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError(std::string(key) + ": expected true/false, got '" + std::string(s) + "'");
}

}  // namespace detail

// One entry per config key. `engines` lists where the key matters; setting a
// key irrelevant to the running engine produces a notice, not an error.
struct ConfigField {
    std::string name;
    std::string help;
    std::string range;
    bool mark0;
    bool mark1;
    std::function<std::optional<std::string>(const SimConfig&)> get;
    std::function<void(SimConfig&, std::string_view)> set;
};

inline const std::vector<ConfigField>& config_fields() {
    using namespace detail;
    static const std::vector<ConfigField> fields = [] {
        std::vector<ConfigField> v;
        auto real = [&v](std::string name, std::string help, std::string range, bool m0, bool m1, double SimConfig::*p) {
            v.push_back({name, std::move(help), std::move(range), m0, m1,
                         [p](const SimConfig& c) -> std::optional<std::string> { return fmt_double(c.*p); },
                         [p, name](SimConfig& c, std::string_view s) { c.*p = parse_double(name, s); }});
        };
        v.push_back({"n_firms", "number of firms N_F", "integer >= 1", true, true,
                     [](const SimConfig& c) -> std::optional<std::string> { return std::to_string(c.n_firms); },
                     [](SimConfig& c, std::string_view s) { c.n_firms = parse_int<std::size_t>("n_firms", s); }});
        real("mu", "Mark 0: workforce per firm; Mark I+: households per firm (integer)", "> 0", true, true, &SimConfig::mu);
        real("c", "consumption propensity", "(0, 1]", true, true, &SimConfig::c);
        real("beta", "intensity of choice for prices and wages", ">= 0", true, false, &SimConfig::beta);
        real("gamma_p", "price adjustment amplitude", "[0, 1]", true, true, &SimConfig::gamma_p);
        real("gamma_y", "production target adjustment amplitude (Mark I+)", "[0, 1]", false, true, &SimConfig::gamma_y);
        real("gamma_w", "wage adjustment amplitude (0 disables wage dynamics)", "[0, 1]", true, false, &SimConfig::gamma_w);
        real("eta_plus", "hiring propensity", "[0, 1]", true, false, &SimConfig::eta_plus);
        real("eta_minus", "firing propensity", "[0, 1]", true, false, &SimConfig::eta_minus);
        real("delta", "dividend share of positive profits", "[0, 1]", true, true, &SimConfig::delta);
        v.push_back({"delta_plus", "dividend share of profit plus positive deposits (replaces delta when set)", "[0, 1] or unset", true, false,
                     [](const SimConfig& c) -> std::optional<std::string> {
                         if (!c.delta_plus) return std::nullopt;
                         return fmt_double(*c.delta_plus);
                     },
                     [](SimConfig& c, std::string_view s) {
                         if (s == "none" || s.empty()) c.delta_plus.reset();
                         else c.delta_plus = parse_double("delta_plus", s);
                     }});
        real("theta", "bankruptcy threshold on -E/(W Y); inf disables defaults", "> 0 or inf", true, false, &SimConfig::theta);
        real("phi", "revival probability per step", "[0, 1]", true, false, &SimConfig::phi);
        real("f", "share of default costs borne by households", "[0, 1]", true, false, &SimConfig::f);
        real("rho0", "baseline interest rate", ">= 0", false, true, &SimConfig::rho0);
        real("tau", "debt repayment fraction per step", "[0, 1]", false, true, &SimConfig::tau);
        v.push_back({"m_goods", "firms visited per household on the goods market", "integer >= 1", false, true,
                     [](const SimConfig& c) -> std::optional<std::string> { return std::to_string(c.m_goods); },
                     [](SimConfig& c, std::string_view s) { c.m_goods = parse_int<int>("m_goods", s); }});
        v.push_back({"horizon", "number of steps T", "integer >= 1", true, true,
                     [](const SimConfig& c) -> std::optional<std::string> { return std::to_string(c.horizon); },
                     [](SimConfig& c, std::string_view s) { c.horizon = parse_int<std::int64_t>("horizon", s); }});
        v.push_back({"burn_in", "steps discarded by analytics", "integer >= 0", true, true,
                     [](const SimConfig& c) -> std::optional<std::string> { return std::to_string(c.burn_in); },
                     [](SimConfig& c, std::string_view s) { c.burn_in = parse_int<std::int64_t>("burn_in", s); }});
        v.push_back({"seed", "64-bit seed of the run stream", "unsigned 64-bit integer", true, true,
                     [](const SimConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); },
                     [](SimConfig& c, std::string_view s) { c.seed = parse_int<std::uint64_t>("seed", s); }});
        v.push_back({"policy.u_trigger", "policy: raise theta while u exceeds this (enables the policy)", "(0, 1) or unset", true, false,
                     [](const SimConfig& c) -> std::optional<std::string> {
                         if (!c.policy) return std::nullopt;
                         return fmt_double(c.policy->u_trigger);
                     },
                     [](SimConfig& c, std::string_view s) {
                         if (!c.policy) c.policy = PolicyRule{};
                         c.policy->u_trigger = parse_double("policy.u_trigger", s);
                     }});
        v.push_back({"policy.theta_high", "policy: theta applied while triggered (enables the policy)", "> 0, >= theta, or unset", true, false,
                     [](const SimConfig& c) -> std::optional<std::string> {
                         if (!c.policy) return std::nullopt;
                         return fmt_double(c.policy->theta_high);
                     },
                     [](SimConfig& c, std::string_view s) {
                         if (!c.policy) c.policy = PolicyRule{};
                         c.policy->theta_high = parse_double("policy.theta_high", s);
                     }});
        v.push_back({"revival_random", "revived firms start at mu*u*xi (true) or mu*u (false)", "bool", true, false,
                     [](const SimConfig& c) -> std::optional<std::string> { return c.revival_random ? "true" : "false"; },
                     [](SimConfig& c, std::string_view s) { c.revival_random = parse_bool("revival_random", s); }});
        real("markup", "markup applied by young firms", ">= 0", false, true, &SimConfig::markup);
        real("initial_liquidity", "initial and reference firm liquidity", ">= 0", false, true, &SimConfig::initial_liquidity);
        v.push_back({"rate_noise", "multiply offered rates by (1 + xi')", "bool", false, true,
                     [](const SimConfig& c) -> std::optional<std::string> { return c.rate_noise ? "true" : "false"; },
                     [](SimConfig& c, std::string_view s) { c.rate_noise = parse_bool("rate_noise", s); }});
        return v;
    }();
    return fields;
}

inline const ConfigField* find_field(std::string_view key) {
    for (const auto& f : config_fields())
        if (f.name == key) return &f;
    return nullptr;
}

inline void set_config_value(SimConfig& cfg, std::string_view key, std::string_view value) {
    const ConfigField* f = find_field(key);
    if (!f) throw ConfigError("unknown config key '" + std::string(key) + "'");
    f->set(cfg, value);
}

namespace detail {

inline void require(bool ok, const char* key, double value, const char* range) {
    if (!ok)
        throw ConfigError(std::string(key) + " = " + fmt_double(value) + " is out of range (allowed: " + range + ")");
}

inline bool in01(double x) { return x >= 0.0 && x <= 1.0; }

}  // namespace detail

inline void validate(const SimConfig& c, Engine engine = Engine::mark0) {
    using detail::in01;
    using detail::require;
    require(c.n_firms >= 1, "n_firms", static_cast<double>(c.n_firms), "integer >= 1");
    require(c.mu > 0 && std::isfinite(c.mu), "mu", c.mu, "> 0");
    if (engine == Engine::mark1)
        require(c.mu >= 1 && std::floor(c.mu) == c.mu, "mu", c.mu, "integer >= 1 for Mark I+");
    require(c.c > 0 && c.c <= 1, "c", c.c, "(0, 1]");
    require(c.beta >= 0 && std::isfinite(c.beta), "beta", c.beta, ">= 0");
    require(in01(c.gamma_p), "gamma_p", c.gamma_p, "[0, 1]");
    require(in01(c.gamma_y), "gamma_y", c.gamma_y, "[0, 1]");
    require(in01(c.gamma_w), "gamma_w", c.gamma_w, "[0, 1]");
    require(in01(c.eta_plus), "eta_plus", c.eta_plus, "[0, 1]");
    require(in01(c.eta_minus), "eta_minus", c.eta_minus, "[0, 1]");
    require(in01(c.delta), "delta", c.delta, "[0, 1]");
    if (c.delta_plus) require(in01(*c.delta_plus), "delta_plus", *c.delta_plus, "[0, 1]");
    require(c.theta > 0, "theta", c.theta, "> 0 or inf");
    require(in01(c.phi), "phi", c.phi, "[0, 1]");
    require(in01(c.f), "f", c.f, "[0, 1]");
    require(c.rho0 >= 0 && std::isfinite(c.rho0), "rho0", c.rho0, ">= 0");
    require(in01(c.tau), "tau", c.tau, "[0, 1]");
    require(c.m_goods >= 1, "m_goods", c.m_goods, "integer >= 1");
    require(c.horizon >= 1, "horizon", static_cast<double>(c.horizon), "integer >= 1");
    require(c.burn_in >= 0, "burn_in", static_cast<double>(c.burn_in), "integer >= 0");
    require(c.markup >= 0 && std::isfinite(c.markup), "markup", c.markup, ">= 0");
    require(c.initial_liquidity >= 0 && std::isfinite(c.initial_liquidity), "initial_liquidity", c.initial_liquidity, ">= 0");
    if (c.policy) {
        require(c.policy->u_trigger > 0 && c.policy->u_trigger < 1, "policy.u_trigger", c.policy->u_trigger, "(0, 1)");
        require(c.policy->theta_high > 0, "policy.theta_high", c.policy->theta_high, "> 0");
        require(c.policy->theta_high >= c.theta, "policy.theta_high", c.policy->theta_high, ">= theta");
    }
}

}  // namespace tipping
