/*
   Copyright 2026 The fkpp-qsd Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "fkpp/config.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/experiments.hpp"

using namespace fkpp;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("minimal analytics config")
{
    const ExperimentConfig c =
        parse_config("experiment: analytics-table\nalpha_grid: [0.1, 1, 10]\ngamma: 1\nseed: 7\n");
    CHECK(c.experiment == Experiment::AnalyticsTable);
    CHECK(c.seed == 7);
    CHECK(c.analytics.alpha_grid.size() == 3);
    const std::string echo = echo_config(c);
    CHECK(echo.find("alpha_grid: [0.1, 1, 10]") != std::string::npos);
    CHECK(echo.find("beta: 0") != std::string::npos);
}

TEST_CASE("log-spaced grids")
{
    const ExperimentConfig c = parse_config("experiment: analytics-table\nalpha_grid: {min: 0.1, max: 10, count: 3}\n");
    REQUIRE(c.analytics.alpha_grid.size() == 3);
    CHECK(c.analytics.alpha_grid[1] == doctest::Approx(1.0));
}

TEST_CASE("unknown keys are rejected with a suggestion")
{
    const std::string e = error_of("experiment: analytics-table\nalpha_: 1\n");
    CHECK(e.find("unknown key 'alpha_'") != std::string::npos);
    CHECK(e.find("did you mean 'alpha'") != std::string::npos);
    const std::string n = error_of("experiment: fixation-rate\nensemble: {replica: 2000}\n");
    CHECK(n.find("ensemble.replicas") != std::string::npos);
    CHECK(error_of("experiment: nonsense\n").find("unknown experiment") != std::string::npos);
    CHECK(error_of("seed: 1\n").find("missing key 'experiment'") != std::string::npos);
}

TEST_CASE("stability violations cite the bound")
{
    const std::string e = error_of("experiment: fixation-rate\nresolution: {L: 64, M: 32}\n");
    CHECK(e.find("delta <= 1/(alpha L^2)") != std::string::npos);
    CHECK(e.find("M >= alpha L / gamma") != std::string::npos);
}

TEST_CASE("out-of-domain values name the constraint")
{
    CHECK(error_of("experiment: fixation-rate\nalpha: -1\n").find("alpha must be positive") != std::string::npos);
    CHECK(error_of("experiment: fixation-rate\nensemble: {replicas: 10}\n").find("ensemble.replicas") !=
          std::string::npos);
    CHECK(error_of("experiment: qsd-twopoint\nbeta: 1\n").find("beta") != std::string::npos);
    CHECK(error_of("experiment: fixation-rate\nresolution: {L: \"x\"}\n").find("wrong type") != std::string::npos);
}

TEST_CASE("experiment names round-trip")
{
    for (auto e : {Experiment::AnalyticsTable, Experiment::FixationRate, Experiment::SurvivalCurve,
                   Experiment::QsdTwoPoint, Experiment::DualityCheck, Experiment::WfReference,
                   Experiment::MartingaleCheck, Experiment::LocalFixation, Experiment::GirsanovCheck})
        CHECK(experiment_from_string(to_string(e)) == e);
}

TEST_CASE("config hash ignores workers and output directory")
{
    ExperimentConfig a = parse_config("experiment: fixation-rate\nseed: 3\n");
    ExperimentConfig b = a;
    b.workers = 8;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 4;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("analytics table is monotone in alpha")
{
    ExperimentConfig c = parse_config("experiment: analytics-table\nalpha_grid: {min: 0.01, max: 100, count: 9}\n");
    c.output_dir = (fs::temp_directory_path() / "fkpp_unit_analytics").string();
    run_experiment(c);
    std::ifstream in(fs::path(c.output_dir) / "analytics.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("# fkpp-qsd experiment=analytics-table config_hash=", 0) == 0);
    std::getline(in, line);
    CHECK(line == "alpha,gamma,theta_star,kappa,lambda,A");
    double prev = 0.0;
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        for (int k = 0; k < 4; ++k) std::getline(ss, cell, ',');
        const double kappa = std::stod(cell);
        CHECK(kappa > prev);
        CHECK(kappa < 1.0);
        prev = kappa;
        ++rows;
    }
    CHECK(rows == 9);
}

TEST_CASE("outputs are byte-identical across 1, 4 and 8 workers")
{
    const std::string text =
        "experiment: fixation-rate\n"
        "seed: 11\n"
        "gamma: 4\n"
        "resolution: {L: 8}\n"
        "ensemble: {replicas: 1000, horizon: 3, checkpoints: 30, snapshot_times: [0.1], snapshot_replicas: 1}\n";
    std::vector<std::string> hashes;
    const fs::path root = fs::temp_directory_path() / "fkpp_unit_determinism";
    std::vector<fs::path> dirs;
    for (int w : {1, 4, 8}) {
        ExperimentConfig c = parse_config(text);
        c.workers = w;
        c.output_dir = (root / std::to_string(w)).string();
        const ExperimentResult r = run_experiment(c);
        CHECK(r.files.back() == "run_manifest.json");
        dirs.push_back(c.output_dir);
    }
    for (const char* f : {"config.yaml", "survival.csv", "trajectories.csv", "rates.csv", "snapshots_0.csv"}) {
        const std::string a = slurp(dirs[0] / f);
        CHECK(!a.empty());
        CHECK(a == slurp(dirs[1] / f));
        CHECK(a == slurp(dirs[2] / f));
    }
}

TEST_CASE("shipped example configs parse and validate")
{
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(FKPP_CONFIG_DIR)) {
        if (entry.path().extension() != ".yaml") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(parse_config(slurp(entry.path())));
        ++seen;
    }
    CHECK(seen == 9);
}
