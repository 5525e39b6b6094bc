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

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fkpp/lattice_spectrum.hpp"
#include "fkpp/spectral.hpp"

using namespace fkpp;

namespace {
const double pi = boost::math::constants::pi<double>();
}

TEST_CASE("theta* frozen values")
{
    // Reference roots from 200-step bisection at 40 digits.
    CHECK(theta_star(1.0) == doctest::Approx(0.48009443695739142971).epsilon(1e-15));
    CHECK(theta_star(0.001) == doctest::Approx(0.01581072952319055451).epsilon(1e-14));
    CHECK(theta_star(0.1) == doctest::Approx(0.15745808633724375089).epsilon(1e-14));
    CHECK(theta_star(10.0) == doctest::Approx(1.14222685478235134274).epsilon(1e-14));
    CHECK(theta_star(1000.0) == doctest::Approx(1.56453825547019744125).epsilon(1e-14));
    CHECK(std::abs(theta_star(pi) - pi / 4) < 1e-14);
}

TEST_CASE("kappa frozen value at alpha = gamma = 1")
{
    const EigenSolution e = fixation_rate(ModelParams{});
    CHECK(e.kappa == doctest::Approx(0.92196267358973877550).epsilon(1e-14));
    CHECK(e.lambda == doctest::Approx(std::exp(-e.kappa)).epsilon(1e-15));
    CHECK(e.A == doctest::Approx(e.theta_star / std::sin(e.theta_star)));
}

TEST_CASE("theta* domain errors")
{
    CHECK_THROWS_AS(theta_star(0.0), DomainError);
    CHECK_THROWS_AS(theta_star(-1.0), DomainError);
    CHECK_THROWS_AS(theta_star(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("kappa increases in alpha toward gamma")
{
    double prev = 0.0;
    for (int i = 0; i <= 60; ++i) {
        const double alpha = std::pow(10.0, -3.0 + 0.1 * i);
        const double k = fixation_rate(ModelParams{alpha, 0.0, 1.0}).kappa;
        CHECK(k > prev);
        CHECK(k < 1.0);
        prev = k;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("series agree with the exact rate in their regimes")
{
    const ModelParams fast{100.0, 0.0, 1.0};
    const double kf = fixation_rate(fast).kappa;
    double prev_err = 1.0;
    for (int order = 0; order <= 3; ++order) {
        const double err = std::abs(kf - kappa_series(fast, Regime::Fast, order));
        CHECK(err < prev_err);
        prev_err = err;
    }
    const ModelParams slow{0.001, 0.0, 1.0};
    const double ks = fixation_rate(slow).kappa;
    CHECK(std::abs(ks - kappa_series(slow, Regime::Slow, 2)) < std::abs(ks - kappa_series(slow, Regime::Slow, 0)));
    CHECK_THROWS_AS(kappa_series(fast, Regime::Fast, 4), DomainError);
    CHECK_THROWS_AS(kappa_series(slow, Regime::Slow, 3), DomainError);
}

TEST_CASE("slow-series remainder constant is about 150")
{
    // |kappa - pi^2 alpha (1 - 8 eps + 48 eps^2)| / (pi^2 alpha eps^3) at eps = 0.01.
    const ModelParams p{0.01, 0.0, 1.0};
    const double eps = 0.01;
    const double r = std::abs(fixation_rate(p).kappa - kappa_series(p, Regime::Slow, 2)) / (pi * pi * p.alpha * eps * eps * eps);
    CHECK(r > 140.0);
    CHECK(r < 170.0);
}

TEST_CASE("qsd density is a probability density on [0, 1/2]")
{
    for (double ratio : {0.01, 1.0, 30.0}) {
        const EigenSolution e = fixation_rate(ModelParams{1.0, 0.0, ratio});
        boost::math::quadrature::gauss_kronrod<double, 61> gk;
        const double mass = 2.0 * gk.integrate([&](double d) { return qsd_density(d, e); }, 0.0, 0.5);
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(qsd_density(0.5, e) >= qsd_density(0.0, e));
    }
    const EigenSolution e = fixation_rate(ModelParams{});
    CHECK_THROWS_AS(qsd_density(0.6, e), DomainError);
    CHECK_THROWS_AS(qsd_density(-0.1, e), DomainError);
}

TEST_CASE("right eigenfunction boundary condition")
{
    // phi'(0) = (gamma / (2 alpha)) phi(0) from the local-time killing at contact.
    EigenSolution e = mstar_from_entrance(fixation_rate(ModelParams{}), 3.0);
    const double h = 1e-6;
    const double deriv = (right_efn_two_particle(h, e) - right_efn_two_particle(0.0, e)) / h;
    CHECK(deriv == doctest::Approx(0.5 * right_efn_two_particle(0.0, e)).epsilon(1e-5));
    CHECK_THROWS_AS(right_efn_two_particle(0.1, fixation_rate(ModelParams{})), StateError);
}

TEST_CASE("M* from the entrance moment")
{
    const EigenSolution e = mstar_from_entrance(fixation_rate(ModelParams{}), 3.2, 0.032);
    REQUIRE(e.M_star);
    CHECK(*e.M_star == doctest::Approx(1.0 / (2.0 * std::cos(e.theta_star) * 3.2)));
    CHECK(e.M_star_stderr == doctest::Approx(*e.M_star * 0.01));
    CHECK_THROWS_AS(mstar_from_entrance(e, 0.5), DomainError);
}

TEST_CASE("QSD moments")
{
    const EigenSolution e = mstar_from_entrance(fixation_rate(ModelParams{}), 3.2);
    const QsdMoments q = qsd_moments(CirclePoint(0.1), CirclePoint(0.3), e);
    CHECK(q.mean == 0.5);
    CHECK(q.cross == doctest::Approx(0.5 - right_efn_two_particle(0.2, e)));
    CHECK(q.covariance == doctest::Approx(q.cross - 0.25));
    // Var of the spatial mean is the average covariance over the circle.
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    const double avg = 2.0 * gk.integrate([&](double d) { return 0.25 - right_efn_two_particle(d, e); }, 0.0, 0.5);
    CHECK(q.var_integral == doctest::Approx(avg).epsilon(1e-12));
}

TEST_CASE("local fixation")
{
    const LocalFixation a = local_fixation_prob(2.0, 4.0);
    CHECK(a.not_fixed == doctest::Approx(0.5));
    CHECK(a.zero_on_F == doctest::Approx(0.25));
    const LocalFixation s = local_fixation_prob(4.0, 4.0);
    CHECK(s.not_fixed == 1.0);
    CHECK(s.zero_on_F == 0.0);
    CHECK_THROWS_AS(local_fixation_prob(5.0, 4.0), DomainError);
    CHECK_THROWS_AS(local_fixation_prob(0.5, 4.0), DomainError);
}

TEST_CASE("selection has no closed form")
{
    CHECK_THROWS_AS(fixation_rate(ModelParams{1.0, 0.5, 1.0}), UnsupportedError);
}

TEST_CASE("lattice dual spectrum converges to the continuum rate")
{
    const double exact = fixation_rate(ModelParams{}).kappa;
    const double k32 = lattice_dual_spectrum(ModelParams{}, 32).kappa;
    const double k128 = lattice_dual_spectrum(ModelParams{}, 128).kappa;
    CHECK(std::abs(k128 / exact - 1.0) < std::abs(k32 / exact - 1.0) + 1e-12);
    CHECK(std::abs(k128 / exact - 1.0) < 1e-4);
}

TEST_CASE("stepping-stone spectrum bias halves when L and M double")
{
    const double exact = fixation_rate(ModelParams{}).kappa;
    const double b64 = stepping_stone_spectrum(ModelParams{}, 64, 128).kappa / exact - 1.0;
    const double b128 = stepping_stone_spectrum(ModelParams{}, 128, 256).kappa / exact - 1.0;
    CHECK(std::abs(b64) < 0.01);
    CHECK(std::abs(b128) == doctest::Approx(std::abs(b64) / 2).epsilon(0.1));
}

TEST_CASE("stepping-stone parity degeneracy at migration weight 1/2")
{
    // With m = 1/2 every lineage hops each step, so two lineages on sites of
    // different parity never meet and the two-point function does not decay.
    CHECK(stepping_stone_spectrum(ModelParams{}, 64, 64).kappa == doctest::Approx(0.0).epsilon(1e-9));
}
