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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fkpp/circle.hpp"
#include "fkpp/params.hpp"
#include "fkpp/rng.hpp"

namespace fkpp {

enum class AbsorbedSide { None, AllZero, AllOne };

std::string to_string(AbsorbedSide side);

/**
 * Stepping-stone state: L demes of M individuals on a circle of the given
 * circumference (spacing circumference / L). counts(i) is the number of
 * type-1 individuals in deme i.
 */
struct LatticeField {
    Eigen::VectorXi counts;
    int M = 1;
    double time = 0.0;
    double circumference = 1.0;

    int sites() const { return static_cast<int>(counts.size()); }
    double spacing() const { return circumference / sites(); }
    double value(int i) const { return static_cast<double>(counts(i)) / M; }
    Eigen::VectorXd values() const { return counts.cast<double>() / M; }
    double mean() const { return values().mean(); }
    AbsorbedSide absorbed_side() const;
    bool absorbed() const { return absorbed_side() != AbsorbedSide::None; }
    /// Deme whose cell [i h, (i+1) h) contains x; x in circle units scaled to the circumference.
    int site_of(double x) const;
    double at(CirclePoint x) const { return value(site_of(x.coordinate() * circumference)); }
};

using Profile = std::function<double(CirclePoint)>;

namespace profiles {
Profile constant(double c);
/// 1 on [a, b) taken counter-clockwise from a, 0 elsewhere.
Profile indicator(double a, double b);
/// `low` on [0, edge), `high` on [edge, 1).
Profile step(double edge, double low = 0.0, double high = 1.0);
} // namespace profiles

/// Site i samples the profile at i / L.
LatticeField make_field(const Profile& profile, int L, int M, double circumference = 1.0);

/// Smallest M that satisfies the stability bound at L sites.
int minimum_deme_size(const ModelParams& params, int L, double circumference = 1.0);

/// max(64, 2 minimum_deme_size), keeping the migration weight m <= 1/4.
int default_deme_size(const ModelParams& params, int L);

/// delta = h / (gamma M) with h the lattice spacing.
double time_step(const ModelParams& params, int L, int M, double circumference = 1.0);

/// Throws ConfigError citing delta <= h^2 / alpha when M is too small.
void check_stability(const ModelParams& params, int L, int M, double circumference = 1.0);

struct FixationOutcome {
    std::optional<double> tau_fix;
    AbsorbedSide side = AbsorbedSide::None;
};

struct Snapshot {
    double t = 0.0;
    Eigen::VectorXd u;
};

struct RunResult {
    FixationOutcome outcome;
    std::vector<Snapshot> snapshots;
    double mean_u0 = 0.0;
    LatticeField final_field;
};

/**
 * Stepping-stone stepper with coefficients fixed at construction.
 *
 * One step: conservative nearest-neighbour migration with per-side weight
 * m = alpha delta / (2 h^2), selection tilt w = v + beta delta v (1 - v)
 * clamped to [0, 1], then Binomial(M, w) resampling.
 */
class SteppingStone {
public:
    SteppingStone(const ModelParams& params, int L, int M, double circumference = 1.0);

    double dt() const { return dt_; }
    double migration() const { return m_; }
    int sites() const { return L_; }
    int deme_size() const { return M_; }
    const ModelParams& params() const { return params_; }

    /// One step in place. Returns the absorbed side after the step.
    AbsorbedSide step(LatticeField& field, RngStream& rng) const;

    /// Up to max_steps steps, stopping at absorption; returns steps taken.
    long advance(LatticeField& field, RngStream& rng, long max_steps) const;

    /// Steps until absorption or t_max, with snapshots at requested times.
    RunResult run_to_fixation(LatticeField field, RngStream& rng, double t_max,
                              const std::vector<double>& snapshot_times = {}) const;

    /// Number of steps that lands closest to time t.
    long steps_for(double t) const;

private:
    void check_field(const LatticeField& field) const;

    ModelParams params_;
    int L_;
    int M_;
    double circumference_;
    double dt_;
    double m_;
};

/// Single step without a cached stepper.
LatticeField spde_step(LatticeField field, const ModelParams& params, RngStream& rng);

/// Real-valued field for the Euler-Maruyama cross-check engine.
struct DenseField {
    Eigen::VectorXd u;
    double time = 0.0;
    double circumference = 1.0;

    int sites() const { return static_cast<int>(u.size()); }
    bool absorbed() const;
};

DenseField make_dense_field(const Profile& profile, int L, double circumference = 1.0);

/**
 * Explicit Euler-Maruyama step with per-site noise sqrt(gamma u (1-u) dt / h),
 * clamped to [0, 1]. Clamping makes this scheme biased near the boundary.
 */
void euler_step_alternative(DenseField& field, const ModelParams& params, double dt,
                            RngStream& rng);

struct RescaledSystem {
    LatticeField field;
    ModelParams params;
    /// Transformed time per original time unit: t_new = time_factor * t_old.
    double time_factor = 1.0;
};

/**
 * Rescaling v(t, x) = u(c^2 t / ell^2, x / ell) onto a circle of
 * circumference ell: alpha c^2, beta c^2 / ell^2, gamma c^2 / ell.
 * Fixation rates transform as kappa_new = (c^2 / ell^2) kappa_old.
 */
RescaledSystem rescale(const LatticeField& field, const ModelParams& params, double c,
                       double ell);

} // namespace fkpp
