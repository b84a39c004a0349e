#include <gtest/gtest.h>

#include <string>

#include "tipping/core/config.hpp"

using namespace tipping;

TEST(Config, DefaultsAreValidForBothEngines) {
    EXPECT_NO_THROW(validate(default_config(Engine::mark0), Engine::mark0));
    EXPECT_NO_THROW(validate(default_config(Engine::mark1), Engine::mark1));
}

TEST(Config, Mark1DefaultsFollowPseudoCode) {
    const auto c = default_config(Engine::mark1);
    EXPECT_DOUBLE_EQ(c.c, 0.8);
    EXPECT_DOUBLE_EQ(c.gamma_p, 0.1);
    EXPECT_DOUBLE_EQ(c.gamma_y, 0.1);
    EXPECT_DOUBLE_EQ(c.delta, 0.2);
    EXPECT_DOUBLE_EQ(c.tau, 0.05);
    EXPECT_EQ(c.m_goods, 3);
    EXPECT_DOUBLE_EQ(c.markup, 0.0);
    EXPECT_DOUBLE_EQ(c.initial_liquidity, 50.0);
    EXPECT_FALSE(c.rate_noise);
}

TEST(Config, ThetaDefaultsToInfinity) {
    EXPECT_TRUE(std::isinf(default_config(Engine::mark0).theta));
}

TEST(Config, OutOfRangeMessageNamesKeyValueAndRange) {
    auto c = default_config(Engine::mark0);
    c.c = 1.5;
    try {
        validate(c);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("c = 1.5"), std::string::npos) << m;
        EXPECT_NE(m.find("(0, 1]"), std::string::npos) << m;
    }
}

TEST(Config, RejectsBadValues) {
    auto bad = [](auto mutate) {
        auto c = default_config(Engine::mark0);
        mutate(c);
        EXPECT_THROW(validate(c), ConfigError);
    };
    bad([](SimConfig& c) { c.n_firms = 0; });
    bad([](SimConfig& c) { c.c = 0; });
    bad([](SimConfig& c) { c.gamma_p = -0.1; });
    bad([](SimConfig& c) { c.eta_plus = 1.1; });
    bad([](SimConfig& c) { c.theta = 0; });
    bad([](SimConfig& c) { c.beta = -1; });
    bad([](SimConfig& c) { c.horizon = 0; });
    bad([](SimConfig& c) { c.delta_plus = 2.0; });
}

TEST(Config, Mark1NeedsIntegerHouseholdsPerFirm) {
    auto c = default_config(Engine::mark1);
    c.mu = 2.5;
    EXPECT_THROW(validate(c, Engine::mark1), ConfigError);
    EXPECT_NO_THROW(validate(c, Engine::mark0));
}

TEST(Config, PolicyThetaHighMustNotBeBelowTheta) {
    auto c = default_config(Engine::mark0);
    c.theta = 3;
    c.policy = PolicyRule{0.1, 2};
    EXPECT_THROW(validate(c), ConfigError);
    c.policy->theta_high = 10;
    EXPECT_NO_THROW(validate(c));
    c.policy->u_trigger = 1.0;
    EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, SetValueParsesInfAndRejectsGarbage) {
    auto c = default_config(Engine::mark0);
    set_config_value(c, "theta", "inf");
    EXPECT_TRUE(std::isinf(c.theta));
    set_config_value(c, "theta", "2.5");
    EXPECT_DOUBLE_EQ(c.theta, 2.5);
    EXPECT_THROW(set_config_value(c, "theta", "2.5x"), ConfigError);
    EXPECT_THROW(set_config_value(c, "no_such_key", "1"), ConfigError);
    set_config_value(c, "seed", "18446744073709551615");
    EXPECT_EQ(c.seed, 18446744073709551615ULL);
}

TEST(Config, FieldsRoundTripThroughTheirText) {
    auto c = default_config(Engine::mark0);
    c.delta_plus = 0.25;
    c.policy = PolicyRule{0.2, 7};
    c.beta = 1.0 / 3.0;
    SimConfig d = default_config(Engine::mark0);
    for (const auto& f : config_fields())
        if (auto v = f.get(c)) f.set(d, *v);
    EXPECT_EQ(d.beta, c.beta);
    EXPECT_EQ(d.delta_plus, c.delta_plus);
    ASSERT_TRUE(d.policy);
    EXPECT_EQ(d.policy->theta_high, 7);
    EXPECT_EQ(d.policy->u_trigger, 0.2);
}

TEST(Config, RatioR) {
    auto c = default_config(Engine::mark0);
    c.eta_plus = 0.2;
    c.eta_minus = 0.1;
    EXPECT_DOUBLE_EQ(c.R(), 2.0);
}
