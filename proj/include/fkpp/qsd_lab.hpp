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
#include <variant>
#include <vector>

#include "fkpp/dual.hpp"
#include "fkpp/fkpp_engine.hpp"
#include "fkpp/spectral.hpp"

namespace fkpp {

enum class Conditioning { OnSurvival, FvStationary };

struct EnsembleEstimate {
    std::string id;
    double value = 0.0;
    double stderr = 0.0;
    Conditioning conditioning = Conditioning::FvStationary;
};

/// Product of (1 - f) over the points, f read at the nearest lattice site.
double eval_D(const LatticeField& f, const std::vector<CirclePoint>& points);
/// D(f; greens) (1 - D(f; reds)).
double eval_E(const LatticeField& f, const DualConfiguration& z);

// ---------------------------------------------------------------- survival

struct SurvivalCurve {
    std::vector<double> times;
    std::vector<double> surviving_fraction;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::vector<long> survivors;
    long replica_count = 0;
};

/// Exact survival counts from per-replica absorption times (empty = survived
/// past the horizon). Intervals are 95% Wilson score intervals.
SurvivalCurve survival_from_times(const std::vector<std::optional<double>>& taus,
                                  const std::vector<double>& checkpoints);

struct EnsembleOptions {
    std::uint64_t seed = 1;
    int workers = 0;
    /// Distinguishes independent ensembles drawn from one seed.
    std::uint64_t case_index = 0;
};

struct SurvivalRun {
    SurvivalCurve curve;
    std::vector<std::optional<double>> tau;
    std::vector<AbsorbedSide> side;
};

/// Runs `replicas` stepping-stone copies of u0 to the last checkpoint.
SurvivalRun survival_curve(const LatticeField& u0, const ModelParams& params,
                           const std::vector<double>& checkpoints, long replicas,
                           const EnsembleOptions& options = {});

struct FitWindow {
    double t_lo = 0.0;
    double t_hi = 0.0;
};

/// [median, 99th percentile] of the observed absorption times.
FitWindow default_window(const std::vector<std::optional<double>>& taus);

struct RateFit {
    double kappa_hat = 0.0;
    double stderr = 0.0;
    double log_intercept = 0.0;
    int points = 0;
};

/**
 * Generalized least squares of log P(t) = a - kappa t over the checkpoints in
 * the window. Survival indicators are nested, so by the delta method
 * Cov(log P_i, log P_j) = (1 - p_i) / (n p_i) for t_i <= t_j.
 */
RateFit fit_rate(const SurvivalCurve& curve, FitWindow window);

// ------------------------------------------------------------ Fleming-Viot

struct FlemingViotOptions {
    int n_replicas = 200;
    double horizon = 20.0;
    /// Negative selects half the horizon.
    double burn_in = -1.0;
    double sample_interval = 0.1;
    /// Probe points for E[u(x)].
    std::vector<double> probes = {0.0, 0.25, 0.5, 0.75};
    /// Distances for E[(1 - u(x)) u(y)], averaged over translations and reflection.
    std::vector<double> distances = {0.0, 0.1, 0.25, 0.5};
    int batches = 20;
};

struct FlemingViotResult {
    std::vector<EnsembleEstimate> one_point;
    std::vector<EnsembleEstimate> two_point;
    /// Lattice distance actually used for each requested distance.
    std::vector<double> lattice_distance;
    EnsembleEstimate var_mean;
    double kappa_hat = 0.0;
    double kappa_stderr = 0.0;
    long replacements = 0;
};

/**
 * Fleming-Viot ensemble of stepping-stone replicas. Replicas advance in chunks
 * of sample_interval; a replica that absorbs is replaced at the end of its
 * chunk by a copy of a uniformly chosen survivor and the lost remainder of the
 * chunk is not counted as exposure. kappa_hat = deaths / alive exposure.
 */
FlemingViotResult fleming_viot(const LatticeField& u0, const ModelParams& params,
                               const FlemingViotOptions& fv, const EnsembleOptions& options = {});

// ---------------------------------------------------------- entrance moment

struct PointSet {
    std::vector<CirclePoint> points;
};
struct Arc {
    double from = 0.0;
    double length = 1.0;
};
struct WholeCircle {};

using SiteSet = std::variant<PointSet, Arc, WholeCircle>;

/// Lattice sites of F in van der Corput order, so every prefix spreads over F.
std::vector<int> lattice_sites(const SiteSet& F, int L);

struct EntranceLevel {
    int n = 0;
    double value = 0.0;
    double stderr = 0.0;
    double discarded_mass = 0.0;
    bool flagged = false;
};

struct EntranceEstimate {
    std::vector<EntranceLevel> levels;
    double value = 0.0;  // largest n
    double stderr = 0.0;
    double trend = 0.0;  // value(n_max) - value(previous n)
    bool flagged = false;
};

struct EntranceOptions {
    int L = 40;
    long replicas = 4000;
    /// Quantile above which e^{kappa tau_1} is winsorized.
    double truncation_quantile = 0.999;
    /// Flag when more than this share of the mass is discarded.
    double flag_threshold = 0.01;
};

/**
 * E_F[e^{kappa tau_1}] for the color-blind lattice system started from n
 * particles cycling over the sites of F. Each level runs `replicas` paths.
 */
EntranceEstimate entrance_moment(const SiteSet& F, const std::vector<int>& n_grid,
                                 const ModelParams& params, const EigenSolution& eigen,
                                 const EntranceOptions& entrance, const EnsembleOptions& options = {});

// ------------------------------------------------------------ duality check

struct DualityOptions {
    int L = 32;
    int M = 0; // 0 selects max(64, 2 alpha L / gamma)
    long replicas_spde = 10000;
    long replicas_dual = 10000;
    /// Rerun both sides at L/2 and add the change of the discrepancy as bias.
    bool bias_budget = true;
};

struct DualityReport {
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    double rhs_stderr = 0.0;
    double bias = 0.0;
    /// |lhs - rhs| / sqrt(lhs_stderr^2 + rhs_stderr^2).
    double z_score = 0.0;
    /// Same with bias^2 added to the variance.
    double z_budgeted = 0.0;
    double colorblind_lhs = 0.0;
    double colorblind_lhs_stderr = 0.0;
    double colorblind_rhs = 0.0;
    double colorblind_rhs_stderr = 0.0;
    double colorblind_z = 0.0;
};

DualityReport duality_check(const Profile& u0, const DualConfiguration& z0, double t,
                            const ModelParams& params, const DualityOptions& duality,
                            const EnsembleOptions& options = {});

// ------------------------------------------------------------ girsanov check

struct GirsanovReport {
    double p_zero = 0.0;
    double p_zero_stderr = 0.0;
    double p_beta = 0.0;
    double p_beta_stderr = 0.0;
    double lower_factor = 0.0; // exp(-(beta/gamma + beta^2 t / (8 gamma)))
    double upper_factor = 0.0; // exp(beta/gamma)
    double z_lower = 0.0;      // (lower bound - p_beta) / stderr, positive = violation
    double z_upper = 0.0;      // (p_beta - upper bound) / stderr, positive = violation
    bool pass = false;
};

double girsanov_lower_factor(double beta, double gamma, double t);
double girsanov_upper_factor(double beta, double gamma);

/// Compares P^beta(tau > t) with P^0(tau > t) on one lattice, within 3 sigma slack.
GirsanovReport girsanov_check(const LatticeField& u0, const ModelParams& params, double t,
                              long replicas, const EnsembleOptions& options = {});

/// Mean and standard error of a sample.
struct MeanStderr {
    double mean = 0.0;
    double stderr = 0.0;
};
MeanStderr mean_stderr(const std::vector<double>& values);

} // namespace fkpp
