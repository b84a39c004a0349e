#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "tipping/io/config_file.hpp"
#include "tipping/io/csv.hpp"
#include "tipping/io/manifest.hpp"
#include "tipping/io/sweep_io.hpp"
#include "tipping/run.hpp"

using namespace tipping;
using namespace tipping::io;

TEST(CsvSchema, GoldenHeaders) {
    EXPECT_EQ(series_header(Engine::mark0), "t,u,pbar,wbar,S,k,bankruptcies,active,inflation");
    EXPECT_EQ(series_header(Engine::mark1), "t,u,pbar,wbar,S,k,bankruptcies,active,inflation,R_measured,mean_rate");
}

TEST(CsvSchema, PhasemapHeader) {
    std::ostringstream os;
    write_phasemap_csv(os, {});
    EXPECT_EQ(os.str(), "axis1,axis2,label,mean_u,amplitude,n_ok\n");
}

TEST(CsvSchema, SeriesRoundTrip) {
    auto c = default_config(Engine::mark0);
    c.n_firms = 50;
    c.horizon = 40;
    const auto r = run_engine(Engine::mark0, c);
    std::ostringstream os;
    write_series_csv(os, r);
    std::istringstream is(os.str());
    const auto t = read_numeric_csv(is);
    EXPECT_EQ(t.header, series_columns(Engine::mark0));
    ASSERT_EQ(t.column("u").size(), 40u);
    for (std::size_t i = 0; i < 40; ++i) EXPECT_EQ(t.column("u")[i], r.series[i].u);  // shortest round-trip is exact
    EXPECT_THROW(t.column("nope"), std::runtime_error);
}

TEST(CsvSchema, NumbersAreShortestRoundTrip) {
    EXPECT_EQ(detail::fmt_double(0.1), "0.1");
    EXPECT_EQ(detail::fmt_double(1.0), "1");
    EXPECT_EQ(detail::fmt_double(kInf), "inf");
}

TEST(ConfigFile, MinimalFileGetsDefaults) {
    const auto c = parse_config("n_firms = 5000\n", Engine::mark0);
    const auto d = default_config(Engine::mark0);
    EXPECT_EQ(c.n_firms, 5000u);
    EXPECT_EQ(c.c, 0.5);
    EXPECT_EQ(c.gamma_p, d.gamma_p);
    EXPECT_EQ(c.delta, 0.02);
    EXPECT_EQ(c.phi, 0.1);
    const auto m = parse_config("n_firms = 10\n", Engine::mark1);
    EXPECT_EQ(m.c, 0.8);
    EXPECT_EQ(m.delta, 0.2);
}

TEST(ConfigFile, CommentsAndInfinity) {
    const auto c = parse_config("# header\ntheta = inf   # no defaults\n\n  beta=2\n", Engine::mark0);
    EXPECT_TRUE(std::isinf(c.theta));
    EXPECT_EQ(c.beta, 2.0);
}

TEST(ConfigFile, UnknownKeyIsAnError) {
    try {
        parse_config("n_firms = 10\ntheta_typo = 2\n", Engine::mark0, nullptr, "x.cfg");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("x.cfg:2"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("theta_typo"), std::string::npos);
    }
}

TEST(ConfigFile, DuplicateAndMalformedLines) {
    EXPECT_THROW(parse_config("c = 0.5\nc = 0.6\n", Engine::mark0), ConfigError);
    EXPECT_THROW(parse_config("c 0.5\n", Engine::mark0), ConfigError);
    EXPECT_THROW(parse_config(" = 0.5\n", Engine::mark0), ConfigError);
}

TEST(ConfigFile, RangeViolationReported) {
    try {
        parse_config("c = 1.5\n", Engine::mark0);
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("c = 1.5"), std::string::npos);
    }
}

TEST(ConfigFile, EngineIrrelevantKeysProduceNotices) {
    std::vector<std::string> notices;
    const auto c = parse_config("rho0 = 0.02\ntheta = 3\n", Engine::mark0, &notices);
    ASSERT_EQ(notices.size(), 1u);
    EXPECT_NE(notices[0].find("rho0"), std::string::npos);
    EXPECT_EQ(c.theta, 3.0);
    notices.clear();
    parse_config("rho0 = 0.02\ntheta = 3\n", Engine::mark1, &notices);
    ASSERT_EQ(notices.size(), 1u);
    EXPECT_NE(notices[0].find("theta"), std::string::npos);
}

TEST(ConfigFile, LoadFromDisk) {
    const auto dir = std::filesystem::temp_directory_path() / "tipping_io_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / "base.cfg";
    std::ofstream(p) << "n_firms = 77\n";
    EXPECT_EQ(load_config(p.string(), Engine::mark0).n_firms, 77u);
    EXPECT_THROW(load_config((dir / "missing.cfg").string(), Engine::mark0), std::runtime_error);
}

TEST(Manifest, ConfigRoundTrip) {
    auto c = default_config(Engine::mark0);
    c.beta = 0.1 + 0.2;
    c.theta = kInf;
    c.delta_plus = 0.3;
    c.policy = PolicyRule{0.1, 10};
    c.seed = 18446744073709551557ULL;
    const auto back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
    EXPECT_EQ(back.beta, c.beta);
    EXPECT_TRUE(std::isinf(back.theta));
    EXPECT_EQ(back.delta_plus, c.delta_plus);
    EXPECT_EQ(back.seed, c.seed);
    ASSERT_TRUE(back.policy);
    EXPECT_EQ(back.policy->theta_high, 10.0);
}

TEST(Manifest, UnsetOptionalsAreOmitted) {
    const auto j = config_to_json(default_config(Engine::mark0));
    EXPECT_FALSE(j.contains("delta_plus"));
    EXPECT_FALSE(j.contains("policy.u_trigger"));
    EXPECT_TRUE(j.contains("theta"));
}

TEST(Manifest, FieldsPresent) {
    auto c = default_config(Engine::mark1);
    c.n_firms = 20;
    c.horizon = 30;
    c.seed = 5;
    const auto r = run_engine(Engine::mark1, c);
    const auto j = manifest_to_json(r.manifest);
    for (const char* k : {"engine", "seed", "code_version", "start_time", "end_time", "wall_seconds", "termination", "config"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_EQ(j["engine"], "mark1");
    EXPECT_EQ(j["seed"], "5");
    const auto in = replay_input_from_json(nlohmann::json::parse(j.dump()));
    EXPECT_EQ(in.engine, Engine::mark1);
    EXPECT_EQ(in.config.n_firms, 20u);
}

TEST(Manifest, WriteRunAndReplayAreIdentical) {
    const auto dir = std::filesystem::temp_directory_path() / "tipping_io_replay";
    std::filesystem::remove_all(dir);
    auto c = default_config(Engine::mark0);
    c.n_firms = 80;
    c.horizon = 300;
    c.theta = 2;
    c.seed = 7;
    write_run(dir, run_engine(Engine::mark0, c));
    const auto in = load_manifest((dir / kManifestFile).string());
    std::ostringstream again;
    write_series_csv(again, run_engine(in.engine, in.config));
    EXPECT_EQ(again.str(), read_file((dir / kSeriesFile).string()));
}

TEST(Manifest, MalformedJsonIsConfigError) {
    const auto p = std::filesystem::temp_directory_path() / "tipping_bad_manifest.json";
    std::ofstream(p) << "{ not json";
    EXPECT_THROW(load_manifest(p.string()), ConfigError);
}

TEST(SweepSpecFile, ParsesAxesAndKeys) {
    const std::string text =
        "engine = mark0\n"
        "n_firms = 200\n"
        "eta_minus = 0.1\n"
        "axis1 = R: linspace(0.5, 3, 6)\n"
        "axis2 = theta: logspace(0.1, 20, 4)\n"
        "seeds_per_cell = 3\n"
        "master_seed = 99\n"
        "classify.fu_mean = 0.9\n";
    const auto s = parse_sweep_spec(text);
    EXPECT_EQ(s.engine, Engine::mark0);
    EXPECT_EQ(s.base.n_firms, 200u);
    ASSERT_EQ(s.axes.size(), 2u);
    EXPECT_EQ(s.axes[0].name, "R");
    EXPECT_EQ(s.axes[0].values.size(), 6u);
    EXPECT_DOUBLE_EQ(s.axes[0].values[5], 3.0);
    EXPECT_NEAR(s.axes[1].values[3], 20.0, 1e-12);
    EXPECT_EQ(s.seeds_per_cell, 3);
    EXPECT_EQ(s.master_seed, 99u);
    EXPECT_EQ(s.thresholds.fu_mean, 0.9);
}

TEST(SweepSpecFile, ListValuesAndErrors) {
    EXPECT_EQ(parse_axis_values("axis1", "1, 2.5, inf"), (std::vector<double>{1, 2.5, kInf}));
    EXPECT_THROW(parse_axis_values("axis1", "1,,2"), ConfigError);
    EXPECT_THROW(parse_sweep_spec("n_firms = 10\n"), ConfigError);
    EXPECT_THROW(parse_sweep_spec("axis1 = R 1,2\n"), ConfigError);
    EXPECT_THROW(parse_sweep_spec("axis1 = bogus: 1,2\n"), ConfigError);
    EXPECT_THROW(parse_sweep_spec("axis1 = theta: 1\nclassify.nope = 1\n"), ConfigError);
    EXPECT_THROW(parse_sweep_spec("axis1 = theta: 1\nr_mode = sideways\n"), ConfigError);
}

TEST(SweepOutput, FilesWritten) {
    sweep::SweepSpec s;
    s.base = default_config(Engine::mark0);
    s.base.n_firms = 50;
    s.base.horizon = 1500;
    s.base.burn_in = 400;
    s.axes = {{"theta", {2.0, 5.0}}};
    s.seeds_per_cell = 1;
    const auto map = sweep::run_sweep(s, 1);
    const auto dir = std::filesystem::temp_directory_path() / "tipping_sweep_out";
    std::filesystem::remove_all(dir);
    write_sweep(dir, s, map);
    const std::string csv = read_file((dir / "phasemap.csv").string());
    EXPECT_EQ(csv.rfind("axis1,axis2,label,mean_u,amplitude,n_ok\n2,,", 0), 0u) << csv;
    const auto cell = nlohmann::json::parse(read_file((dir / "cells" / "cell_1_0.json").string()));
    EXPECT_EQ(cell["point"][0], 5.0);
    EXPECT_EQ(cell["runs"].size(), 1u);
    EXPECT_TRUE(cell.contains("thresholds"));
}
