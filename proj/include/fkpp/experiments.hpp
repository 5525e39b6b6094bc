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

#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fkpp/config.hpp"
#include "fkpp/dual.hpp"

namespace fkpp {

struct ExperimentResult {
    /// Files written, relative to the output directory, run_manifest.json last.
    std::vector<std::string> files;
    /// Short human-readable lines for the terminal.
    std::vector<std::string> summary;
};

/// Runs one experiment and writes its CSVs, config.yaml and run_manifest.json
/// into cfg.output_dir. Everything except the manifest is a pure function of
/// (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// alpha,gamma,theta_star,kappa,lambda,A over the grid, gamma outermost.
void write_analytics_table(std::ostream& out, const std::vector<double>& alphas,
                           const std::vector<double>& gammas, const std::string& meta);

struct DualityCase {
    std::string id;
    InitialCondition u0;
    DualConfiguration z0;
    double beta = 0.0;
    double t = 0.0;
};

/// The fixed battery: three (u0, z0) pairs, beta in {0, 1}, t in {0.05, 0.2}.
/// All points sit on sites of both L = 32 and L = 16.
std::vector<DualityCase> duality_battery();

} // namespace fkpp
