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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fkpp/fkpp_engine.hpp"
#include "fkpp/params.hpp"

namespace fkpp {

enum class Experiment {
    AnalyticsTable,
    FixationRate,
    SurvivalCurve,
    QsdTwoPoint,
    DualityCheck,
    WfReference,
    MartingaleCheck,
    LocalFixation,
    GirsanovCheck,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);

struct InitialCondition {
    std::string profile = "step"; // step | constant | indicator
    double value = 0.5;           // constant
    double edge = 0.5;            // step
    double from = 0.0;            // indicator
    double to = 0.5;
};
Profile to_profile(const InitialCondition& ic);

struct Resolution {
    int L = 64;
    int M = 0; // 0 selects default_deme_size
};

struct EnsembleConfig {
    long replicas = 10000;
    double horizon = 20.0;
    /// Evenly spaced checkpoints on (0, horizon] unless checkpoint_list is set.
    int checkpoints = 200;
    std::vector<double> checkpoint_list;
    std::vector<double> snapshot_times;
    int snapshot_replicas = 0;

    std::vector<double> checkpoint_times() const;
};

struct AnalyticsConfig {
    std::vector<double> alpha_grid;
    std::vector<double> gamma_grid;
};

struct FlemingViotConfig {
    int replicas = 400;
    double horizon = 30.0;
    double burn_in = -1.0;
    double sample_interval = 0.1;
    int batches = 10;
    std::vector<double> probes = {0.0, 0.25, 0.5, 0.75};
    std::vector<double> distances = {0.0, 0.1, 0.25, 0.5};
};

struct EntranceConfig {
    int L = 0; // 0 follows resolution.L
    long replicas = 20000;
    std::vector<int> n_grid; // empty selects {L, 2L, 4L, 8L}
    double truncation_quantile = 0.999;
};

struct DualityConfig {
    int L = 32;
    int M = 0;
    long replicas_spde = 10000;
    long replicas_dual = 10000;
    bool bias_budget = true;
};

struct WfConfig {
    int deme_size = 1000;
    double x0 = 0.5;
    long replicas = 100000;
    double histogram_time = 3.0;
    int bins = 20;
    std::vector<double> times = {2.0, 2.5, 3.0, 3.5, 4.0};
};

struct MartingaleConfig {
    int L = 256;
    long paths = 100000;
    std::vector<double> checkpoints = {0.25, 0.5, 1.0, 1.5};
    double green = 0.0;
    double red = 0.25;
    int count_series_runs = 0;
};

struct LocalFixationConfig {
    /// Arc lengths of the sets F = [0, length), nested by construction.
    std::vector<double> arc_lengths = {0.1, 0.25, 0.5};
};

struct GirsanovConfig {
    double t = 1.0;
    long replicas = 10000;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::AnalyticsTable;
    ModelParams params;
    Resolution resolution;
    EnsembleConfig ensemble;
    InitialCondition initial;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    int workers = 0;

    AnalyticsConfig analytics;
    FlemingViotConfig fleming_viot;
    EntranceConfig entrance;
    DualityConfig duality;
    WfConfig wf;
    MartingaleConfig martingale;
    LocalFixationConfig local_fixation;
    GirsanovConfig girsanov;

    /// resolution.M, or the default deme size when unset.
    int deme_size() const;
    /// entrance.L, or resolution.L when unset.
    int entrance_sites() const;
    /// entrance.n_grid, or {L, 2L, 4L, 8L} when unset.
    std::vector<int> entrance_grid() const;
};

/// Parses and validates a YAML document. Unknown keys are rejected with a
/// suggestion; out-of-domain values name the violated constraint.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Resolved config as YAML, defaults filled in. Worker count and output
/// directory are left out so the echo is a pure function of the experiment.
std::string echo_config(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of echo_config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Re-runs validation, e.g. after command-line overrides.
void validate(const ExperimentConfig& cfg);

} // namespace fkpp
