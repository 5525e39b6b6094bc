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

#include "fkpp/fkpp_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fkpp {

std::string to_string(AbsorbedSide side)
{
    switch (side) {
    case AbsorbedSide::AllZero:
        return "all-zero";
    case AbsorbedSide::AllOne:
        return "all-one";
    default:
        return "none";
    }
}

AbsorbedSide LatticeField::absorbed_side() const
{
    if ((counts.array() == 0).all()) return AbsorbedSide::AllZero;
    if ((counts.array() == M).all()) return AbsorbedSide::AllOne;
    return AbsorbedSide::None;
}

int LatticeField::site_of(double x) const
{
    const int L = sites();
    long i = std::lround(x / spacing());
    i %= L;
    if (i < 0) i += L;
    return static_cast<int>(i);
}

namespace profiles {

Profile constant(double c)
{
    return [c](CirclePoint) { return c; };
}

Profile indicator(double a, double b)
{
    const double start = CirclePoint::canonical(a);
    // b < a wraps through 0; b - a >= 1 covers the circle.
    const double len = b - a >= 1.0 ? 1.0 : CirclePoint::canonical(b - a);
    return [start, len](CirclePoint x) {
        if (len >= 1.0) return 1.0;
        const double off = CirclePoint::canonical(x.coordinate() - start);
        return off < len ? 1.0 : 0.0;
    };
}

Profile step(double edge, double low, double high)
{
    return [=](CirclePoint x) { return x.coordinate() < edge ? low : high; };
}

} // namespace profiles

LatticeField make_field(const Profile& profile, int L, int M, double circumference)
{
    if (L < 1) throw DomainError("lattice needs L >= 1");
    if (M < 1) throw DomainError("deme size needs M >= 1");
    if (!(circumference > 0.0)) throw DomainError("circumference must be positive");
    LatticeField f;
    f.counts.resize(L);
    f.M = M;
    f.circumference = circumference;
    for (int i = 0; i < L; ++i) {
        const double v = profile(CirclePoint(static_cast<double>(i) / L));
        if (!(v >= 0.0 && v <= 1.0))
            throw DomainError("profile value " + std::to_string(v) + " outside [0, 1] at site " +
                              std::to_string(i));
        f.counts(i) = static_cast<int>(std::lround(M * v));
    }
    return f;
}

int minimum_deme_size(const ModelParams& params, int L, double circumference)
{
    params.validate();
    const double h = circumference / L;
    // m = alpha / (2 gamma M h) <= 1/2; a small slack absorbs rounding in alpha L / gamma.
    return std::max(1, static_cast<int>(std::ceil(params.alpha / (params.gamma * h) - 1e-9)));
}

int default_deme_size(const ModelParams& params, int L)
{
    // Twice the bound: at m = 1/2 the even and odd sublattices decouple.
    return std::max(64, 2 * minimum_deme_size(params, L));
}

double time_step(const ModelParams& params, int L, int M, double circumference)
{
    params.validate();
    return (circumference / L) / (params.gamma * M);
}

void check_stability(const ModelParams& params, int L, int M, double circumference)
{
    const int need = minimum_deme_size(params, L, circumference);
    if (L > 1 && M < need) {
        std::ostringstream os;
        const double h = circumference / L;
        os << "unstable discretization: delta = h/(gamma M) = " << time_step(params, L, M, circumference)
           << " exceeds the bound delta <= 1/(alpha L^2) = " << h * h / params.alpha
           << " (circumference " << circumference << "); need M >= alpha L / gamma = " << need
           << ", got M = " << M;
        throw ConfigError(os.str());
    }
}

SteppingStone::SteppingStone(const ModelParams& params, int L, int M, double circumference)
    : params_(params), L_(L), M_(M), circumference_(circumference)
{
    params_.validate();
    if (L < 1 || M < 1) throw DomainError("stepping stone needs L >= 1 and M >= 1");
    check_stability(params_, L, M, circumference);
    dt_ = time_step(params_, L, M, circumference);
    const double h = circumference / L;
    m_ = L > 1 ? params_.alpha * dt_ / (2.0 * h * h) : 0.0;
}

void SteppingStone::check_field(const LatticeField& field) const
{
    if (field.sites() != L_ || field.M != M_)
        throw StateError("field resolution does not match the stepper");
}

AbsorbedSide SteppingStone::step(LatticeField& field, RngStream& rng) const
{
    static thread_local std::vector<int> next;
    next.resize(static_cast<std::size_t>(L_));
    const int* k = field.counts.data();
    const double inv_m = 1.0 / M_;
    const double bd = params_.beta * dt_;
    int zeros = 0;
    int fulls = 0;
    for (int i = 0; i < L_; ++i) {
        const int km = k[i == 0 ? L_ - 1 : i - 1];
        const int kc = k[i];
        const int kp = k[i == L_ - 1 ? 0 : i + 1];
        const double v = (kc + m_ * (kp - 2 * kc + km)) * inv_m;
        double w = v + bd * v * (1.0 - v);
        w = std::clamp(w, 0.0, 1.0);
        const int nk = rng.binomial(M_, w);
        next[i] = nk;
        zeros += nk == 0;
        fulls += nk == M_;
    }
    std::copy(next.begin(), next.end(), field.counts.data());
    field.time += dt_;
    if (zeros == L_) return AbsorbedSide::AllZero;
    if (fulls == L_) return AbsorbedSide::AllOne;
    return AbsorbedSide::None;
}

long SteppingStone::advance(LatticeField& field, RngStream& rng, long max_steps) const
{
    check_field(field);
    if (field.absorbed()) return 0;
    const double t0 = field.time;
    long n = 0;
    while (n < max_steps) {
        ++n;
        if (step(field, rng) != AbsorbedSide::None) break;
    }
    field.time = t0 + n * dt_;
    return n;
}

long SteppingStone::steps_for(double t) const
{
    return std::max(0L, std::lround(t / dt_));
}

RunResult SteppingStone::run_to_fixation(LatticeField field, RngStream& rng, double t_max,
                                         const std::vector<double>& snapshot_times) const
{
    check_field(field);
    if (!(t_max > 0.0)) throw DomainError("run_to_fixation needs t_max > 0");
    RunResult r;
    r.mean_u0 = field.mean();

    std::vector<double> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    auto take = [&](long s) {
        while (next_snap < snaps.size() && steps_for(snaps[next_snap]) <= s) {
            if (snaps[next_snap] <= t_max) r.snapshots.push_back({snaps[next_snap], field.values()});
            ++next_snap;
        }
    };

    const double t0 = field.time;
    const long total = steps_for(t_max);
    AbsorbedSide side = field.absorbed_side();
    long s = 0;
    take(0);
    while (side == AbsorbedSide::None && s < total) {
        side = step(field, rng);
        ++s;
        field.time = t0 + s * dt_;
        take(s);
    }
    if (side != AbsorbedSide::None) {
        r.outcome.tau_fix = field.time;
        r.outcome.side = side;
        // Absorbed states are traps; remaining snapshots repeat the final state.
        take(std::numeric_limits<long>::max());
    }
    r.final_field = std::move(field);
    return r;
}

LatticeField spde_step(LatticeField field, const ModelParams& params, RngStream& rng)
{
    SteppingStone s(params, field.sites(), field.M, field.circumference);
    s.step(field, rng);
    return field;
}

bool DenseField::absorbed() const
{
    return (u.array() == 0.0).all() || (u.array() == 1.0).all();
}

DenseField make_dense_field(const Profile& profile, int L, double circumference)
{
    if (L < 1) throw DomainError("lattice needs L >= 1");
    DenseField f;
    f.u.resize(L);
    f.circumference = circumference;
    for (int i = 0; i < L; ++i) {
        const double v = profile(CirclePoint(static_cast<double>(i) / L));
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("profile value outside [0, 1]");
        f.u(i) = v;
    }
    return f;
}

void euler_step_alternative(DenseField& field, const ModelParams& params, double dt,
                            RngStream& rng)
{
    params.validate();
    const int L = field.sites();
    const double h = field.circumference / L;
    if (L > 1 && params.alpha * dt > h * h)
        throw ConfigError("unstable Euler step: need dt <= h^2 / alpha = 1/(alpha L^2) on the unit circle");
    const Eigen::VectorXd u = field.u;
    const double diff = L > 1 ? 0.5 * params.alpha * dt / (h * h) : 0.0;
    const double noise = params.gamma * dt / h;
    for (int i = 0; i < L; ++i) {
        const double uc = u(i);
        const double lap = u((i + 1) % L) - 2.0 * uc + u((i + L - 1) % L);
        const double q = uc * (1.0 - uc);
        double next = uc + diff * lap + params.beta * dt * q;
        if (q > 0.0) next += std::sqrt(noise * q) * rng.normal();
        field.u(i) = std::clamp(next, 0.0, 1.0);
    }
    field.time += dt;
}

RescaledSystem rescale(const LatticeField& field, const ModelParams& params, double c, double ell)
{
    params.validate();
    if (!(c > 0.0) || !(ell > 0.0)) throw DomainError("rescale needs c > 0 and ell > 0");
    RescaledSystem r;
    r.params.alpha = params.alpha * c * c;
    r.params.beta = params.beta * c * c / (ell * ell);
    r.params.gamma = params.gamma * c * c / ell;
    r.time_factor = ell * ell / (c * c);
    r.field = field;
    r.field.circumference = field.circumference * ell;
    r.field.time = field.time * r.time_factor;
    return r;
}

} // namespace fkpp
