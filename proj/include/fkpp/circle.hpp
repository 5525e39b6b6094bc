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

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "fkpp/errors.hpp"

namespace fkpp {

/// A point of the unit circle R/Z, stored in [0, 1).
class CirclePoint {
public:
    CirclePoint() = default;
    explicit CirclePoint(double x) : x_(canonical(x)) {}

    static double canonical(double x) noexcept
    {
        double r = x - std::floor(x);
        // x slightly below an integer can round up to exactly 1.
        return r >= 1.0 ? 0.0 : r;
    }

    double coordinate() const noexcept { return x_; }
    CirclePoint shifted(double c) const noexcept { return CirclePoint(x_ + c); }
    CirclePoint reflected() const noexcept { return CirclePoint(-x_); }

    friend bool operator==(CirclePoint a, CirclePoint b) noexcept { return a.x_ == b.x_; }

private:
    double x_ = 0.0;
};

/// Geodesic distance on a circle of the given circumference, in [0, ell/2].
template <class Scalar>
Scalar geodesic_distance(Scalar x, Scalar y, Scalar ell)
{
    using std::abs;
    using std::floor;
    Scalar d = abs(x - y);
    d -= ell * floor(d / ell);
    return d < ell - d ? d : ell - d;
}

inline double geodesic_distance(CirclePoint x, CirclePoint y) noexcept
{
    const double d = std::abs(x.coordinate() - y.coordinate());
    return std::min(d, 1.0 - d);
}

namespace detail {

inline void require_kernel_args(double t, double alpha, double ell)
{
    if (!(t > 0.0)) throw DomainError("heat kernel needs t > 0, got " + std::to_string(t));
    if (!(alpha > 0.0)) throw DomainError("heat kernel needs alpha > 0");
    if (!(ell > 0.0)) throw DomainError("heat kernel needs a positive circumference");
}

} // namespace detail

/**
 * Heat kernel of the generator (alpha/2) d^2/dx^2 on a circle of
 * circumference ell, by the method of images.
 *
 * Image terms run over |k| <= ceil(8.5 sqrt(alpha t) / ell) + 2, which puts the
 * dropped tail below exp(-36) relative to the leading term.
 */
template <class Scalar = double>
Scalar heat_kernel_on(Scalar t, Scalar x, Scalar y, Scalar alpha, Scalar ell)
{
    using std::ceil;
    using std::exp;
    using std::floor;
    using std::sqrt;
    detail::require_kernel_args(static_cast<double>(t), static_cast<double>(alpha),
                                static_cast<double>(ell));
    const Scalar var = alpha * t;
    // Shortest signed displacement, in [-ell/2, ell/2].
    Scalar r = y - x;
    r -= ell * floor(r / ell + Scalar(0.5));
    const int K = static_cast<int>(ceil(static_cast<double>(8.5 * sqrt(var) / ell))) + 2;
    Scalar sum(0);
    for (int k = K; k >= 1; --k) {
        const Scalar a = r + k * ell;
        const Scalar b = r - k * ell;
        sum += exp(-a * a / (2 * var)) + exp(-b * b / (2 * var));
    }
    sum += exp(-r * r / (2 * var));
    const Scalar two_pi = boost::math::constants::two_pi<Scalar>();
    return sum / sqrt(two_pi * var);
}

/// Heat kernel on the unit circle with diffusivity alpha.
inline double heat_kernel(double t, CirclePoint x, CirclePoint y, double alpha)
{
    return heat_kernel_on<double>(t, x.coordinate(), y.coordinate(), alpha, 1.0);
}

/**
 * Mean local time at zero, accumulated over a window of length delta, of the
 * geodesic difference of two independent walkers started distance d apart,
 * each with diffusivity alpha/2 per coordinate so the difference has
 * diffusivity two_alpha.
 */
double local_time_window_mean(double d, double delta, double two_alpha);

} // namespace fkpp
