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

#include <optional>
#include <vector>

#include "fkpp/rng.hpp"

namespace fkpp {

struct WfParams {
    double beta = 0.0;
    double gamma = 1.0;
};

/// -gamma n (n - 1) / 2, the n-th eigenvalue of the neutral generator.
double wf_spectrum(int n, double gamma);

/// 6 x (1 - x) e^{-gamma t}, the neutral large-t survival probability.
double wf_survival_asymptotic(double x, double t, double gamma);

struct KingmanState {
    int block_count = 1;
    double time = 0.0;
};

/// Waits Exp(gamma N (N - 1) / 2) and merges two blocks; N = 1 never changes.
KingmanState kingman_step(KingmanState state, double gamma, RngStream& rng);

/// Block count at time t (merges past t are not applied).
KingmanState kingman_run(KingmanState state, double gamma, double t, RngStream& rng);

struct WfSample {
    double value = 0.0;
    bool absorbed = false;
    std::optional<double> tau;
};

inline constexpr int kDefaultWfDemeSize = 100;

/// Binomial Wright-Fisher chain: the one-deme stepping-stone engine.
WfSample wf_simulate(double x0, const WfParams& params, RngStream& rng, double t,
                     int M_wf = kDefaultWfDemeSize);

/// sup |F_n - F| against Uniform(0, 1).
double ks_distance_uniform(std::vector<double> sample);

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    double mass = 0.0;
};

/// Normalized histogram of values in [0, 1] on equal bins.
std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins);

} // namespace fkpp
