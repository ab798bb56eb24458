// Copyright 2026 The coarse-metrology Authors
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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace coarse_metrology;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               (std::string("coarse_metrology_cli_") + info->name() + "_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunResult run(const std::string &args, const std::string &env = "unset COARSE_METROLOGY_SEED;") {
        const fs::path out = dir_ / "stdout.txt";
        const fs::path err = dir_ / "stderr.txt";
        const std::string cmd = env + " '" + std::string(COARSE_METROLOGY_CLI) + "' " + args + " >'" +
                                out.string() + "' 2>'" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out);
        r.err = slurp(err);
        return r;
    }

    fs::path dir_;
};

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST(ParseAngle, Forms) {
    using cli::parse_angle;
    const double pi = std::numbers::pi;
    EXPECT_EQ(*parse_angle("1.25"), 1.25);
    EXPECT_EQ(*parse_angle("pi"), pi);
    EXPECT_EQ(*parse_angle("pi/2"), pi / 2.0);
    EXPECT_EQ(*parse_angle("-3*pi/4"), -3.0 * pi / 4.0);
    EXPECT_EQ(*parse_angle("2pi"), 2.0 * pi);
    EXPECT_EQ(*parse_angle(" PI / 8 "), pi / 8.0);
    EXPECT_FALSE(parse_angle("optimal").has_value());
    EXPECT_THROW(parse_angle("pie"), InvalidArgument);
    EXPECT_THROW(parse_angle("pi/0"), InvalidArgument);
    EXPECT_THROW(parse_angle("abc"), InvalidArgument);
    EXPECT_THROW(parse_angle(""), InvalidArgument);
}

TEST(ResolveSeed, Precedence) {
    ::unsetenv(cli::kSeedEnvVar);
    EXPECT_EQ(cli::resolve_seed(std::nullopt), cli::kDefaultSeed);
    ::setenv(cli::kSeedEnvVar, "99", 1);
    EXPECT_EQ(cli::resolve_seed(std::nullopt), 99u);
    EXPECT_EQ(cli::resolve_seed(7), 7u);
    ::setenv(cli::kSeedEnvVar, "12x", 1);
    EXPECT_THROW(cli::resolve_seed(std::nullopt), InvalidArgument);
    ::unsetenv(cli::kSeedEnvVar);
}

TEST(FormatReal, RoundTrips) {
    for (const double v : {0.1, 1.0 / 3.0, 5.436563656918091e-4, 1e-300, 3.5e11}) {
        EXPECT_EQ(std::stod(cli::format_real(v)), v);
    }
    EXPECT_EQ(cli::format_real(std::numeric_limits<double>::infinity()), "inf");
}

TEST_F(CliTest, PhaseFisherSingleQubitCommon) {
    const auto r = run("phase-fisher --state ghz --reference common --n 1 --delta 0.3 --phi 1.5707963");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"state", "reference", "n", "delta", "phi", "fisher", "dphi"}));
    EXPECT_NEAR(std::stod(rows[1][5]), 0.83527, 1e-5);
}

TEST_F(CliTest, PhaseFisherHeisenbergLimit) {
    const auto r = run("phase-fisher --state ghz --reference common --n 5 --delta 0 --phi pi/2");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(std::stod(rows[1][5]), 25.0);
}

TEST_F(CliTest, PhaseFisherOptimalPhaseScan) {
    const auto r = run("phase-fisher --state product --reference independent --n 1 4 --delta 0 0.2 --phi optimal");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(parse_csv(r.out).size(), 5u);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run("phase-fisher --state ghz --n 5 --delta 0").exit_code, 2);
    EXPECT_EQ(run("phase-fisher --state qutrit --n 5 --delta 0 --phi 1").exit_code, 2);
    EXPECT_EQ(run("no-such-command").exit_code, 2);
    EXPECT_EQ(run("").exit_code, 2);
    EXPECT_EQ(run("mc-verify --shots 100").exit_code, 2);
    EXPECT_EQ(run("mc-verify --reps 10").exit_code, 2);
    EXPECT_EQ(run("freq-curve --format xml").exit_code, 2);
    EXPECT_EQ(run("--help").exit_code, 0);
}

TEST_F(CliTest, ComputationErrorsExitOne) {
    const auto alt = run("phase-fisher --state alternating --reference independent --n 2 --delta 0.1 --phi 1");
    EXPECT_EQ(alt.exit_code, 1);
    EXPECT_FALSE(alt.err.empty());
    EXPECT_EQ(run("phase-fisher --n 2 --delta 0.1 --phi pi/q").exit_code, 1);
}

TEST_F(CliTest, OptimalN) {
    const auto r = run("optimal-n --reference common independent --delta 0.1");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][0], "common");
    EXPECT_EQ(rows[1][2], "7");
    EXPECT_NEAR(std::stod(rows[1][3]), 7.0710678, 1e-6);
    EXPECT_EQ(rows[2][0], "independent");
    EXPECT_EQ(rows[2][2], "100");
}

TEST_F(CliTest, OptimalNDivergesWithoutCoarsening) {
    const auto r = run("optimal-n --reference common --delta 0");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("divergence"), std::string::npos);
}

TEST_F(CliTest, FreqCurveHeaderAndJitterFreeRow) {
    const auto r = run("freq-curve");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
              "delta,dw2_product_markov,dw2_ghz_markov,dw2_product_nonmarkov,dw2_ghz_nonmarkov");
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 62u);
    EXPECT_EQ(std::stod(rows[1][0]), 0.0);
    EXPECT_NEAR(std::stod(rows[1][1]), 5.43656e-4, 1e-9);
    EXPECT_NEAR(std::stod(rows[1][2]), std::stod(rows[1][1]), 1e-12);
    EXPECT_NEAR(std::stod(rows[1][4]), 3.29745e-6, 1e-11);
}

TEST_F(CliTest, FreqCurveValuesRoundTripExactly) {
    const auto r = run("freq-curve --delta 0 0.001 0.01 0.1");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 5u);
    const frequency::DephasingModel markov{1.0, 1};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double delta = std::stod(rows[i][0]);
        const auto s = frequency::make_scenario(StateKind::Product, 10'000, markov, 1.0, delta);
        EXPECT_EQ(std::stod(rows[i][1]), frequency::freq_variance(s).value) << delta;
    }
}

TEST_F(CliTest, FreqCurveScaledColumnIsDisplayOnly) {
    const auto plain = parse_csv(run("freq-curve --delta 0 0.01").out);
    const auto r = run("freq-curve --delta 0 0.01 --scale-ghz-markov 1e-8");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows[0].size(), 6u);
    EXPECT_EQ(rows[0][5], "dw2_ghz_markov_scaled");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][2], plain[i][2]);
        EXPECT_DOUBLE_EQ(std::stod(rows[i][5]), 1e-8 * std::stod(rows[i][2]));
    }
}

TEST_F(CliTest, FreqCurveRejectsBadGrid) {
    const auto r = run("freq-curve --delta 0.1 0.01");
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, Crossover) {
    const auto r = run("crossover");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1][0], "markov");
    EXPECT_EQ(rows[1][1], "true");
    EXPECT_EQ(std::stod(rows[1][2]), 0.0);
    EXPECT_EQ(rows[2][0], "nonmarkov");
    EXPECT_EQ(rows[2][1], "true");
    EXPECT_NEAR(std::stod(rows[2][2]), 0.0134404855027, 1e-10);
    EXPECT_EQ(rows[2][3], "true");
}

TEST_F(CliTest, OracleVerify) {
    const auto r = run("oracle-verify");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 9u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(std::stod(rows[i][3]), 1e-8);

    const auto capped = run("oracle-verify --n 13");
    EXPECT_EQ(capped.exit_code, 1);
    EXPECT_NE(capped.err.find("12"), std::string::npos);

    const auto sharp = run("oracle-verify --delta 0");
    ASSERT_EQ(sharp.exit_code, 0);
    for (const auto &row : parse_csv(sharp.out)) {
        if (row[0] == "state") continue;
        EXPECT_LE(std::stod(row[3]), 1e-13);
    }
}

TEST_F(CliTest, McVerifyDefaultCasesAndDeterminism) {
    const auto a = run("mc-verify");
    ASSERT_EQ(a.exit_code, 0) << a.err;
    const auto b = run("mc-verify");
    EXPECT_EQ(a.out, b.out);
    const auto rows = parse_csv(a.out);
    ASSERT_EQ(rows.size(), 3u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][8], "true");
}

TEST_F(CliTest, McVerifySeedSources) {
    const auto by_flag = run("mc-verify --seed 5");
    const auto by_env = run("mc-verify", "COARSE_METROLOGY_SEED=5");
    const auto flag_wins = run("mc-verify --seed 5", "COARSE_METROLOGY_SEED=6");
    const auto by_default = run("mc-verify");
    EXPECT_EQ(by_flag.out, by_env.out);
    EXPECT_EQ(by_flag.out, flag_wins.out);
    EXPECT_NE(by_flag.out, by_default.out);
    EXPECT_EQ(run("mc-verify", "COARSE_METROLOGY_SEED=abc").exit_code, 1);
}

TEST_F(CliTest, OutputFileIsByteIdentical) {
    const auto f1 = dir_ / "a.csv";
    const auto f2 = dir_ / "b.csv";
    ASSERT_EQ(run("freq-curve --points 5 --output '" + f1.string() + "'").exit_code, 0);
    ASSERT_EQ(run("freq-curve --points 5 -o '" + f2.string() + "'").exit_code, 0);
    EXPECT_EQ(slurp(f1), slurp(f2));
    EXPECT_EQ(parse_csv(slurp(f1)).size(), 7u);
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
    const auto cfg = dir_ / "run.cfg";
    std::ofstream(cfg) << "# phase scan\nstate = ghz\nreference = common\nn = 5\ndelta = 0.3\nphi = pi/10\n";
    const auto from_file = run("phase-fisher --config '" + cfg.string() + "'");
    ASSERT_EQ(from_file.exit_code, 0) << from_file.err;
    auto rows = parse_csv(from_file.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][2], "5");

    const auto overridden = run("phase-fisher --config '" + cfg.string() + "' --n 2 --delta 0");
    ASSERT_EQ(overridden.exit_code, 0) << overridden.err;
    rows = parse_csv(overridden.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1][2], "2");
    EXPECT_EQ(std::stod(rows[1][5]), 4.0);

    EXPECT_EQ(run("phase-fisher --config '" + (dir_ / "missing.cfg").string() + "'").exit_code, 2);
}

TEST_F(CliTest, JsonMirrorsCsv) {
    const auto csv = parse_csv(run("optimal-n --reference common independent --delta 0.1").out);
    const auto r = run("optimal-n --reference common independent --delta 0.1 --format json");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto j = nlohmann::ordered_json::parse(r.out);
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), csv.size() - 1);
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::size_t k = 0;
        for (const auto &[key, value] : j[i].items()) {
            EXPECT_EQ(key, csv[0][k]);
            if (value.is_number()) {
                EXPECT_EQ(value.get<double>(), std::stod(csv[i + 1][k]));
            } else {
                EXPECT_EQ(value.get<std::string>(), csv[i + 1][k]);
            }
            ++k;
        }
    }
}
