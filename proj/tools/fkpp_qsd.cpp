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

// fkpp-qsd: experiment driver.
//
//   fkpp-qsd run <config.yaml> [--seed N] [--workers N] [--out DIR]
//   fkpp-qsd analytics --alpha A [A ...] --gamma G [G ...]
//
// FKPP_QSD_MAX_WORKERS caps the worker count.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fkpp/config.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/experiments.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Quasi-stationary analysis of the stochastic FKPP equation on the circle"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
    auto* run = app.add_subcommand("run", "Run the experiment described by a YAML config");
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the master seed");
    run->add_option("--workers", workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_dir, "Output directory");

    std::vector<double> alphas;
    std::vector<double> gammas{1.0};
    auto* analytics = app.add_subcommand("analytics", "Print the neutral eigen-analytics as CSV");
    analytics->add_option("--alpha", alphas, "Diffusion rate(s)")->required()->check(CLI::PositiveNumber);
    analytics->add_option("--gamma", gammas, "Noise strength(s)")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            fkpp::ExperimentConfig cfg = fkpp::load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (workers) cfg.workers = *workers;
            if (out_dir) cfg.output_dir = *out_dir;
            fkpp::validate(cfg);
            const fkpp::ExperimentResult r = fkpp::run_experiment(cfg);
            for (const auto& line : r.summary) std::cout << line << '\n';
            for (const auto& f : r.files) std::cout << "wrote " << cfg.output_dir << '/' << f << '\n';
        } else if (*analytics) {
            fkpp::write_analytics_table(std::cout, alphas, gammas, "fkpp-qsd analytics");
        }
    } catch (const fkpp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
