// Copyright 2026 The tcmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "tcm/commands.hpp"

namespace tcm {
namespace {

namespace fs = std::filesystem;

class TempDir : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               (std::string("tcm_cli_") + info->test_suite_name() + "_" + info->name() + "_" +
                std::to_string(std::random_device{}()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string slurp(const fs::path &p) const {
        std::ifstream in(p);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    RunConfig config(int n, double g, double dt, int steps) const {
        RunConfig c;
        c.model = ModelParams::uniform(n, g);
        c.evolution.dt = dt;
        c.evolution.steps = steps;
        c.trajectory_path = dir_ / "traj.csv";
        c.summary_path = dir_ / "summary.json";
        return c;
    }

    fs::path dir_;
    std::ostringstream out_;
    std::ostringstream err_;
};

TEST(RunConfigJson, RoundTrip) {
    RunConfig c;
    c.model = ModelParams::uniform(3, 0.05, 1.5, 2.0);
    c.model.couplings = {0.01, 0.02, 0.03};
    c.model.photon_factors = PhotonFactors::flat;
    c.evolution.dt = 0.125;
    c.evolution.steps = 77;
    c.evolution.strategy = GridStrategy::grid(2);
    c.evolution.stride = 7;
    c.evolution.renormalize_trace = true;
    c.max_atoms = 12;
    c.trajectory_path = "a/b.csv";
    c.seed = 42;
    EXPECT_EQ(parse_run_config(serialize_run_config(c)), c);
    EXPECT_EQ(parse_run_config(serialize_run_config(RunConfig{})), RunConfig{});
}

TEST(RunConfigJson, Rejections) {
    // Well-formed but invalid values parse, then fail validation.
    EXPECT_THROW(parse_run_config(R"({"evolution": {"steps": 0}})").validate(), InvalidArgument);
    EXPECT_THROW(parse_run_config(R"({"model": {"atoms": 2, "couplings": [0.1]}})").validate(), InvalidArgument);
    EXPECT_THROW(parse_run_config(R"({"model": {"atoms": 2, "colour": 1}})"), InvalidArgument);
    EXPECT_THROW(parse_run_config(R"({"evolution": {"steps": "many"}})"), InvalidArgument);
    EXPECT_THROW(parse_run_config("{not json"), InvalidArgument);
    const auto c = parse_run_config(R"({"model": {"atoms": 4, "coupling": 0.03}, "evolution": {"strategy": "2x2"}})");
    EXPECT_EQ(c.model, ModelParams::uniform(4, 0.03));
    EXPECT_EQ(c.evolution.strategy, GridStrategy::grid(2));
}

TEST_F(TempDir, SimulateSingleAtomFollowsSineSquared) {
    RunConfig c;  // defaults: n = 1, g = 0.02, dt = 0.05, 3142 steps
    c.trajectory_path = dir_ / "traj.csv";
    c.summary_path = dir_ / "summary.json";
    ASSERT_EQ(cmd_simulate(c, out_, err_), ExitCode::ok) << err_.str();
    const auto rec = parse_trajectory_csv(slurp(c.trajectory_path));
    ASSERT_EQ(rec.times.size(), 3143u);
    double worst = 0.0;
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        const double s = std::sin(0.02 * rec.times[k]);
        worst = std::max(worst, std::abs(rec.photon_probs[k][1] - s * s));
    }
    EXPECT_LE(worst, 1e-4);
    const auto summary = nlohmann::json::parse(slurp(c.summary_path));
    EXPECT_EQ(summary.at("atoms"), 1);
    EXPECT_TRUE(summary.at("rwa").at("valid").get<bool>());
    EXPECT_TRUE(err_.str().empty());
}

TEST_F(TempDir, SimulateEightAtomsStartsFullyExcited) {
    auto c = config(8, 0.02, 0.02, 3);
    ASSERT_EQ(cmd_simulate(c, out_, err_), ExitCode::ok) << err_.str();
    const auto text = slurp(c.trajectory_path);
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,P_0,P_1,P_2,P_3,P_4,P_5,P_6,P_7,P_8,trace,excitation");
    const auto rec = parse_trajectory_csv(text);
    EXPECT_EQ(rec.photon_probs[0][0], 1.0);
    EXPECT_EQ(rec.excitation[0], 8.0);
}

TEST_F(TempDir, SimulateIsBitReproducible) {
    auto c = config(3, 0.05, 0.1, 40);
    c.evolution.strategy = GridStrategy::grid(2);
    ASSERT_EQ(cmd_simulate(c, out_, err_), ExitCode::ok);
    const auto first = slurp(c.trajectory_path);
    ASSERT_EQ(cmd_simulate(c, out_, err_), ExitCode::ok);
    EXPECT_EQ(slurp(c.trajectory_path), first);
}

TEST_F(TempDir, SimulateWarnsOutsideRwa) {
    auto c = config(1, 0.5, 0.01, 10);
    EXPECT_EQ(cmd_simulate(c, out_, err_), ExitCode::ok);
    EXPECT_NE(err_.str().find("rotating-wave"), std::string::npos);
}

TEST_F(TempDir, SimulateExitCodes) {
    auto bad = config(1, 0.02, 0.05, 0);
    EXPECT_EQ(cmd_simulate(bad, out_, err_), ExitCode::invalid_config);

    auto too_big = config(16, 0.02, 0.05, 1);
    EXPECT_EQ(cmd_simulate(too_big, out_, err_), ExitCode::invalid_config);

    auto drift = config(3, 1.0, 0.5, 100);
    drift.evolution.taylor_order = 1;
    EXPECT_EQ(cmd_simulate(drift, out_, err_), ExitCode::accuracy_abort);
    EXPECT_FALSE(fs::exists(drift.trajectory_path));
    EXPECT_FALSE(fs::exists(drift.summary_path));

    auto unwritable = config(1, 0.02, 0.05, 2);
    unwritable.trajectory_path = dir_ / "missing" / "dir" / "traj.csv";
    EXPECT_EQ(cmd_simulate(unwritable, out_, err_), ExitCode::io_error);
}

TEST(TrajectoryCsv, MalformedInputs) {
    EXPECT_THROW(parse_trajectory_csv(""), MalformedCsv);
    EXPECT_THROW(parse_trajectory_csv("t,P_0,P_1,trace,excitation\n0,1,0,1\n"), MalformedCsv);
    EXPECT_THROW(parse_trajectory_csv("t,P_0,P_1,trace,excitation\n0,1,x,1,1\n"), MalformedCsv);
    EXPECT_THROW(parse_trajectory_csv("time,P_0,P_1,trace,excitation\n0,1,0,1,1\n"), MalformedCsv);
}

// P_m for n = 8 with unit ladder amplitudes: binomial in sin^2(g t).
std::string binomial_csv(double g, double dt, int steps) {
    std::ostringstream s;
    s.precision(17);
    s << "t,P_0,P_1,P_2,P_3,P_4,P_5,P_6,P_7,P_8,trace,excitation\n";
    for (int k = 0; k <= steps; ++k) {
        const double t = k * dt;
        const double s2 = std::pow(std::sin(g * t), 2);
        s << t;
        for (int m = 0; m <= 8; ++m) {
            const double c = std::tgamma(9.0) / (std::tgamma(m + 1.0) * std::tgamma(9.0 - m));
            s << ',' << c * std::pow(s2, m) * std::pow(1.0 - s2, 8 - m);
        }
        s << ",1,8\n";
    }
    return s.str();
}

TEST_F(TempDir, PlotdataWritesSeriesAndPeaks) {
    const auto traj = dir_ / "traj.csv";
    write_file_atomic(traj, binomial_csv(0.02, 0.05, 1600));
    ASSERT_EQ(cmd_plotdata(traj, dir_ / "plots", out_, err_), ExitCode::ok) << err_.str();
    for (int m = 0; m <= 8; ++m) {
        const auto series = slurp(dir_ / "plots" / ("P_" + std::to_string(m) + ".csv"));
        EXPECT_EQ(series.substr(0, series.find('\n')), "t,P_" + std::to_string(m));
    }
    std::istringstream peaks(slurp(dir_ / "plots" / "peaks.csv"));
    std::string line;
    std::getline(peaks, line);
    EXPECT_EQ(line, "sector,t,height");
    std::map<int, double> first_height;
    while (std::getline(peaks, line)) {
        int m = 0;
        double t = 0.0;
        double h = 0.0;
        char comma = 0;
        std::istringstream row(line);
        row >> m >> comma >> t >> comma >> h;
        first_height.try_emplace(m, h);
    }
    ASSERT_TRUE(first_height.count(1) && first_height.count(7));
    EXPECT_NEAR(first_height[1], first_height[7], 0.02);
    EXPECT_FALSE(first_height.count(0));  // P_0 only decreases before t = pi/(2g)
}

TEST_F(TempDir, PlotdataZeroColumnHasNoPeaks) {
    const auto traj = dir_ / "traj.csv";
    write_file_atomic(traj, "t,P_0,P_1,trace,excitation\n0,1,0,1,1\n0.1,1,0,1,1\n0.2,1,0,1,1\n");
    ASSERT_EQ(cmd_plotdata(traj, dir_ / "plots", out_, err_), ExitCode::ok);
    EXPECT_EQ(slurp(dir_ / "plots" / "peaks.csv"), "sector,t,height\n");
}

TEST_F(TempDir, PlotdataErrors) {
    EXPECT_EQ(cmd_plotdata(dir_ / "absent.csv", dir_ / "plots", out_, err_), ExitCode::io_error);
    const auto traj = dir_ / "bad.csv";
    write_file_atomic(traj, "garbage\n");
    EXPECT_EQ(cmd_plotdata(traj, dir_ / "plots", out_, err_), ExitCode::malformed_csv);
}

TEST(Verify, QuickPassesAndDetectsBrokenShift) {
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cmd_verify({}, out, err), ExitCode::ok) << out.str() << err.str();
    testing::FaultInjection fault;
    fault.reverse_a_shift = true;
    const testing::ScopedFault guard(fault);
    EXPECT_EQ(cmd_verify({}, out, err), ExitCode::verify_failed);
}

TEST_F(TempDir, BenchWritesTables) {
    BenchCommand cmd;
    cmd.spec.dimensions = {16, 32};
    cmd.spec.strategies = {GridStrategy::serial(), GridStrategy::grid(2), GridStrategy::grid(4)};
    cmd.spec.repetitions = 1;
    cmd.spec.evolution_steps = 2;
    cmd.out_dir = dir_ / "bench";
    ASSERT_EQ(cmd_bench(cmd, out_, err_), ExitCode::ok) << err_.str();
    std::istringstream jsonl(slurp(cmd.out_dir / "records.jsonl"));
    std::string line;
    int lines = 0;
    while (std::getline(jsonl, line)) {
        EXPECT_EQ(nlohmann::json::parse(line).size(), 6u);
        ++lines;
    }
    EXPECT_EQ(lines, 12);
    for (const char *task : {"taylor", "evolution"}) {
        for (const char *kind : {"timing_", "speedup_"}) {
            const auto text = slurp(cmd.out_dir / (std::string(kind) + task + ".csv"));
            EXPECT_NE(text.find("strategy,16,32\n"), std::string::npos);
            EXPECT_NE(text.find("\n4x4,"), std::string::npos);
        }
    }
    cmd.spec.strategies = {GridStrategy::grid(2)};
    EXPECT_NE(cmd_bench(cmd, out_, err_), ExitCode::ok);
}

}  // namespace
}  // namespace tcm
