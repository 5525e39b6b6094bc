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
#include <vector>

#include "fkpp/circle.hpp"
#include "fkpp/params.hpp"
#include "fkpp/rng.hpp"
#include "fkpp/spectral.hpp"

namespace fkpp {

/**
 * Two-type particle configuration. A configuration that starts with no reds
 * is treated as color-blind: it is never killed.
 */
struct DualConfiguration {
    std::vector<CirclePoint> greens;
    std::vector<CirclePoint> reds;
    double time = 0.0;
    bool killed = false;

    std::size_t size() const { return greens.size() + reds.size(); }
    bool colorblind() const { return reds.empty() && !killed; }

    static DualConfiguration pair(CirclePoint green, CirclePoint red);
    static DualConfiguration colorblind_points(std::vector<CirclePoint> points);
};

enum class StopRule {
    Never,     // run to t_max
    AtKilling, // stop when the last red dies
    AtMeet,    // stop at tau^Z
    AtTau1,    // stop at tau_1
};

struct DualOptions {
    StopRule stop = StopRule::AtKilling;
    /// Times at which counts (and optionally configurations) are recorded.
    std::vector<double> checkpoints;
    bool record_configurations = false;
    /// Test mode: switch coalescence off entirely.
    bool coalescence = true;
};

struct CountSample {
    double t = 0.0;
    int n_green = 0;
    int n_red = 0;
};

struct DualOutcome {
    std::optional<double> tau_partial; // reds extinct
    std::optional<double> tau_meet;    // exactly one green and one red, co-located
    std::optional<double> tau_one;     // exactly two particles, co-located
    std::vector<CountSample> series;
    std::vector<DualConfiguration> configurations;
    DualConfiguration final_state;
};

/**
 * Continuous-time branching-coalescing random walks on (1/L) Z_L.
 *
 * Each particle jumps to a neighbour at total rate alpha L^2, branches in place
 * at rate beta, and each co-located unordered pair coalesces at rate gamma L.
 * A green-red coalescence removes the red; a same-colour one removes either
 * member with probability 1/2.
 *
 * While no pair shares a site the total rate is constant, so run() draws the
 * number of events up to the next checkpoint in one Poisson draw and replays
 * the embedded chain until the first event that creates a co-located pair.
 */
class LatticeDual {
public:
    LatticeDual(const ModelParams& params, int L);

    int sites() const { return L_; }

    /// One Gillespie event from z; returns the configuration after it.
    DualConfiguration step(const DualConfiguration& z, RngStream& rng) const;

    DualOutcome run(const DualConfiguration& z0, double t_max, RngStream& rng,
                    const DualOptions& options = {}) const;

    int site_of(CirclePoint x) const;

private:
    ModelParams params_;
    int L_;
};

/**
 * Time-stepped Brownian particles with step delta. A pair at distance d
 * coalesces in a step with probability 1 - exp(-(gamma / 2 alpha) l(d)),
 * l the mean window local time; branching is a Poisson(beta delta) clock.
 * Pairs count as co-located when closer than sqrt(alpha delta).
 */
class ContinuousDual {
public:
    ContinuousDual(const ModelParams& params, double delta);

    double delta() const { return delta_; }
    double pair_probability(double d) const;
    double max_pair_probability() const { return table_.front(); }

    DualConfiguration step(const DualConfiguration& z, RngStream& rng) const;

    DualOutcome run(const DualConfiguration& z0, double t_max, RngStream& rng,
                    const DualOptions& options = {}) const;

private:
    void advance(std::vector<double>& x, std::vector<std::uint8_t>& red, RngStream& rng) const;

    ModelParams params_;
    double delta_;
    double cutoff_;
    double table_step_;
    std::vector<double> table_;
};

/**
 * Extension of the two-particle right eigenfunction to dual configurations:
 * M* cos(2 theta* (1/2 - d)) for one green and one red at distance d, zero
 * once the reds are gone. Other configurations have no closed form.
 */
double phi_bar(const DualConfiguration& z, const EigenSolution& eigen);

struct MartingalePoint {
    double t = 0.0;
    double mean = 0.0;
    double stderr = 0.0;
};

/// Sample mean of e^{kappa t} phi_bar(Z_t) at the recorded checkpoints.
std::vector<MartingalePoint> martingale_functional(const std::vector<DualOutcome>& paths,
                                                   const EigenSolution& eigen,
                                                   const std::vector<double>& checkpoints);

} // namespace fkpp
