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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fkpp/circle.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/rng.hpp"

using namespace fkpp;

namespace {

// Plain image sum with a fixed, generous number of images in long double.
long double brute_kernel(long double t, long double x, long double y, long double alpha)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    long double s = 0.0L;
    for (int k = -200; k <= 200; ++k) {
        const long double a = x - y + k;
        s += std::exp(-a * a / (2.0L * alpha * t));
    }
    return s / std::sqrt(2.0L * pi * alpha * t);
}

// E[L^0] as the occupation integral two_alpha * int_0^delta p(s, 0, d) ds,
// with s = v^2 to remove the s^(-1/2) singularity at d = 0.
double quadrature_local_time(double d, double delta, double two_alpha)
{
    const double pi = 3.14159265358979323846;
    auto integrand = [&](double v) {
        if (v <= 0.0) return d == 0.0 ? 2.0 / std::sqrt(2.0 * pi * two_alpha) : 0.0;
        return 2.0 * v * heat_kernel_on<double>(v * v, 0.0, d, two_alpha, 1.0);
    };
    return two_alpha * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0,
                                                                                      std::sqrt(delta), 12, 1e-13);
}

} // namespace

TEST_CASE("canonical representatives")
{
    CHECK(CirclePoint(1.0).coordinate() == 0.0);
    CHECK(CirclePoint(-0.25).coordinate() == doctest::Approx(0.75));
    CHECK(CirclePoint(3.5).coordinate() == doctest::Approx(0.5));
    CHECK(CirclePoint(0.2).shifted(0.9).coordinate() == doctest::Approx(0.1));
    CHECK(CirclePoint(0.2).reflected().coordinate() == doctest::Approx(0.8));
    // A value just below 1 that rounds up must still land in [0, 1).
    const double r = CirclePoint::canonical(-1e-18);
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
}

TEST_CASE("geodesic distance")
{
    CHECK(geodesic_distance(CirclePoint(0.1), CirclePoint(0.9)) == doctest::Approx(0.2));
    CHECK(geodesic_distance(CirclePoint(0.0), CirclePoint(0.5)) == doctest::Approx(0.5));
    CHECK(geodesic_distance(CirclePoint(0.3), CirclePoint(0.3)) == 0.0);
    CHECK(geodesic_distance(0.5, 3.5, 4.0) == doctest::Approx(1.0));
    RngStream rng(3, 1);
    for (int i = 0; i < 1000; ++i) {
        const CirclePoint x(rng.uniform()), y(rng.uniform()), z(rng.uniform());
        const double dxy = geodesic_distance(x, y);
        CHECK(dxy <= 0.5);
        CHECK(dxy == doctest::Approx(geodesic_distance(y, x)));
        CHECK(geodesic_distance(x, z) <= dxy + geodesic_distance(y, z) + 1e-15);
    }
}

TEST_CASE("heat kernel matches a long image sum")
{
    for (double t : {1e-4, 1e-2, 0.1, 1.0, 5.0})
        for (double alpha : {0.3, 1.0, 4.0})
            for (double d : {0.0, 0.1, 0.37, 0.5}) {
                const double k = heat_kernel(t, CirclePoint(0.0), CirclePoint(d), alpha);
                const double b = static_cast<double>(brute_kernel(t, 0.0L, d, alpha));
                CHECK(std::abs(k - b) <= 1e-10 * std::max(1.0, b));
            }
}

TEST_CASE("heat kernel integrates to one and is translation invariant")
{
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    for (double t : {1e-3, 0.05, 0.7}) {
        const double mass = gk.integrate(
            [&](double y) { return heat_kernel(t, CirclePoint(0.3), CirclePoint(y), 1.0); }, 0.0, 1.0, 15, 1e-13);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
        const double a = heat_kernel(t, CirclePoint(0.1), CirclePoint(0.35), 1.0);
        const double b = heat_kernel(t, CirclePoint(0.1).shifted(0.42), CirclePoint(0.35).shifted(0.42), 1.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("heat kernel on a circle of circumference ell rescales")
{
    // p_ell(t, x, y) = p_1(t / ell^2, x / ell, y / ell) / ell.
    const double ell = 2.5;
    for (double t : {0.01, 0.3, 2.0}) {
        const double a = heat_kernel_on<double>(t, 0.4, 1.9, 1.0, ell);
        const double b = heat_kernel_on<double>(t / (ell * ell), 0.4 / ell, 1.9 / ell, 1.0, 1.0) / ell;
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("heat kernel rejects bad arguments")
{
    CHECK_THROWS_AS(heat_kernel(0.0, CirclePoint(0), CirclePoint(0), 1.0), DomainError);
    CHECK_THROWS_AS(heat_kernel(1.0, CirclePoint(0), CirclePoint(0), -1.0), DomainError);
    CHECK_THROWS_AS((heat_kernel_on<double>(1.0, 0.0, 0.0, 1.0, 0.0)), DomainError);
}

TEST_CASE("window local time against quadrature")
{
    for (double delta : {1e-5, 1e-3, 0.02})
        for (double d : {0.0, 0.001, 0.01, 0.05, 0.2, 0.5})
            for (double two_alpha : {0.5, 2.0}) {
                const double q = local_time_window_mean(d, delta, two_alpha);
                const double c = quadrature_local_time(d, delta, two_alpha);
                CHECK(std::abs(q - c) <= 1e-10 * std::max(1e-3, c));
            }
}

TEST_CASE("window local time against Monte Carlo")
{
    // Tanaka: E|X_delta| - |d| = E[L^0_delta] on the line; images are
    // negligible at this delta.
    const double delta = 1e-3, two_alpha = 2.0, d = 0.02;
    RngStream rng(11, 2);
    const int n = 100000;
    double s = 0.0, ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = std::abs(d + std::sqrt(two_alpha * delta) * rng.normal()) - d;
        s += v;
        ss += v * v;
    }
    const double mean = s / n;
    const double se = std::sqrt((ss / n - mean * mean) / n);
    CHECK(std::abs(mean - local_time_window_mean(d, delta, two_alpha)) < 4.0 * se);
}

TEST_CASE("window local time is decreasing in distance")
{
    double prev = local_time_window_mean(0.0, 1e-3, 2.0);
    for (int i = 1; i <= 50; ++i) {
        const double v = local_time_window_mean(0.01 * i, 1e-3, 2.0);
        CHECK(v <= prev);
        prev = v;
    }
}
