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

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "fkpp/circle.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/params.hpp"

namespace fkpp {

/**
 * Root of 4 theta tan(theta) = ratio on (0, pi/2).
 *
 * Bisection to the bracket's floating-point limit, then two guarded Newton
 * steps. Works for any Scalar with std-style tan/cos overloads, including
 * Boost.Multiprecision types.
 */
template <class Scalar = double>
Scalar theta_star(Scalar ratio)
{
    using std::cos;
    using std::tan;
    if (!(ratio > Scalar(0)) || !(ratio < Scalar(std::numeric_limits<double>::infinity())))
        throw DomainError("theta_star needs a positive finite ratio");
    const Scalar half_pi = boost::math::constants::half_pi<Scalar>();
    auto g = [&](const Scalar& th) { return 4 * th * tan(th) - ratio; };
    Scalar lo(0);
    Scalar hi = half_pi;
    const int iterations = std::numeric_limits<Scalar>::digits + 16;
    for (int i = 0; i < iterations; ++i) {
        const Scalar mid = (lo + hi) / 2;
        if (mid == lo || mid == hi) break;
        if (g(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    Scalar th = (lo + hi) / 2;
    for (int i = 0; i < 2; ++i) {
        const Scalar c = cos(th);
        const Scalar dg = 4 * tan(th) + 4 * th / (c * c);
        const Scalar next = th - g(th) / dg;
        if (!(next > lo && next < hi)) break;
        th = next;
    }
    return th;
}

/// Leading eigen-data of the two-particle killed dual.
struct EigenSolution {
    double alpha = 0.0;
    double gamma = 0.0;
    double theta_star = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
    double A = 0.0;
    std::optional<double> M_star;
    double M_star_stderr = 0.0;
};

namespace detail {
inline void require_neutral(const ModelParams& p)
{
    p.validate();
    if (p.beta != 0.0)
        throw UnsupportedError("closed-form eigen-analytics exist only for beta = 0");
}
} // namespace detail

inline EigenSolution fixation_rate(const ModelParams& p)
{
    detail::require_neutral(p);
    EigenSolution e;
    e.alpha = p.alpha;
    e.gamma = p.gamma;
    e.theta_star = theta_star<double>(p.ratio());
    e.kappa = 4.0 * p.alpha * e.theta_star * e.theta_star;
    e.lambda = std::exp(-e.kappa);
    e.A = e.theta_star / std::sin(e.theta_star);
    return e;
}

enum class Regime { Fast, Slow };

/**
 * Truncated expansion of kappa. Fast: in gamma/alpha, valid for
 * gamma << alpha. Slow: in alpha/gamma, valid for alpha << gamma.
 * order counts retained terms beyond the leading one (0..3 fast, 0..2 slow).
 */
inline double kappa_series(const ModelParams& p, Regime regime, int order)
{
    detail::require_neutral(p);
    if (regime == Regime::Fast) {
        if (order < 0 || order > 3) throw DomainError("fast series order must be in 0..3");
        const double e = p.gamma / p.alpha;
        const double c[4] = {1.0, -1.0 / 12.0, 1.0 / 180.0, -1.0 / 3780.0};
        double s = 0.0;
        double pw = 1.0;
        for (int k = 0; k <= order; ++k, pw *= e) s += c[k] * pw;
        return p.gamma * s;
    }
    if (order < 0 || order > 2) throw DomainError("slow series order must be in 0..2");
    const double e = p.alpha / p.gamma;
    const double c[3] = {1.0, -8.0, 48.0};
    double s = 0.0;
    double pw = 1.0;
    for (int k = 0; k <= order; ++k, pw *= e) s += c[k] * pw;
    const double pi = boost::math::constants::pi<double>();
    return pi * pi * p.alpha * s;
}

namespace detail {
inline void require_half_distance(double d)
{
    if (!(d >= 0.0 && d <= 0.5))
        throw DomainError("distance must lie in [0, 1/2], got " + std::to_string(d));
}
} // namespace detail

/// Stationary density of the conditioned two-particle distance.
inline double qsd_density(double d, const EigenSolution& e)
{
    detail::require_half_distance(d);
    return e.A * std::cos(2.0 * e.theta_star * (0.5 - d));
}

/// Right eigenfunction phi0(d) = M* cos(2 theta* (1/2 - d)); needs M*.
inline double right_efn_two_particle(double d, const EigenSolution& e)
{
    detail::require_half_distance(d);
    if (!e.M_star) throw StateError("right eigenfunction needs M* (use mstar_from_entrance)");
    return *e.M_star * std::cos(2.0 * e.theta_star * (0.5 - d));
}

/// Attach M* = 1 / (2 cos(theta*) E_S[e^{kappa tau_1}]).
inline EigenSolution mstar_from_entrance(EigenSolution e, double entrance_mean,
                                         double entrance_stderr = 0.0)
{
    if (!(entrance_mean >= 1.0))
        throw DomainError("entrance moment E[e^{kappa tau}] must be >= 1");
    const double m = 1.0 / (2.0 * std::cos(e.theta_star) * entrance_mean);
    e.M_star = m;
    e.M_star_stderr = m * entrance_stderr / entrance_mean;
    return e;
}

struct QsdMoments {
    double mean = 0.5;
    double cross = 0.0;       // E[u(x) u(y)]
    double covariance = 0.0;  // Cov(u(x), u(y))
    double var_integral = 0.0; // Var(integral of u)
};

inline QsdMoments qsd_moments(CirclePoint x, CirclePoint y, const EigenSolution& e)
{
    if (!e.M_star) throw StateError("QSD moments need M* (use mstar_from_entrance)");
    const double m = *e.M_star;
    const double c = std::cos(2.0 * e.theta_star * (0.5 - geodesic_distance(x, y)));
    QsdMoments q;
    q.mean = 0.5;
    q.cross = 0.5 - m * c;
    q.covariance = 0.25 - m * c;
    q.var_integral = 0.25 - m * std::sin(e.theta_star) / e.theta_star;
    return q;
}

struct LocalFixation {
    double not_fixed = 0.0; // P(u not identically 0 or 1 on F)
    double zero_on_F = 0.0; // P(u = 0 on F)
};

/// Local fixation probabilities under the QSD from entrance moments E_F <= E_S.
inline LocalFixation local_fixation_prob(double E_F, double E_S)
{
    if (!(E_F >= 1.0) || !(E_F <= E_S))
        throw DomainError("entrance moments must satisfy 1 <= E_F <= E_S");
    LocalFixation r;
    r.not_fixed = E_F / E_S;
    r.zero_on_F = 0.5 * (1.0 - r.not_fixed);
    return r;
}

} // namespace fkpp
