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
#include <set>

#include "fkpp/qsd_lab.hpp"

using namespace fkpp;

TEST_CASE("dual functions on constant fields")
{
    const LatticeField zero = make_field(profiles::constant(0.0), 8, 10);
    const LatticeField one = make_field(profiles::constant(1.0), 8, 10);
    const LatticeField c = make_field(profiles::constant(0.3), 8, 10);
    const std::vector<CirclePoint> pts = {CirclePoint(0.1), CirclePoint(0.6), CirclePoint(0.9)};
    CHECK(eval_D(zero, pts) == 1.0);
    CHECK(eval_D(one, pts) == 0.0);
    CHECK(eval_D(c, pts) == doctest::Approx(std::pow(0.7, 3)));
    DualConfiguration z;
    z.greens = {CirclePoint(0.1), CirclePoint(0.2)};
    z.reds = {CirclePoint(0.5)};
    CHECK(eval_E(zero, z) == 0.0);
    CHECK(eval_E(one, z) == 0.0);
    CHECK(eval_E(c, z) == doctest::Approx(0.49 * 0.3));
}

TEST_CASE("survival curve from absorption times")
{
    std::vector<std::optional<double>> taus = {0.5, 1.5, std::nullopt, 2.5};
    const SurvivalCurve c = survival_from_times(taus, {0.0, 1.0, 2.0, 3.0});
    CHECK(c.replica_count == 4);
    CHECK(c.surviving_fraction == std::vector<double>{1.0, 0.75, 0.5, 0.25});
    CHECK(c.survivors == std::vector<long>{4, 3, 2, 1});
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        CHECK(c.ci_low[i] <= c.surviving_fraction[i]);
        CHECK(c.ci_high[i] >= c.surviving_fraction[i]);
        CHECK(c.surviving_fraction[i] * c.replica_count == doctest::Approx(c.survivors[i]));
    }
}

TEST_CASE("survival curve at t = 0 is one")
{
    const LatticeField u0 = make_field(profiles::step(0.5), 8, 64);
    EnsembleOptions o;
    const SurvivalRun r = survival_curve(u0, ModelParams{}, {0.0, 0.5}, 200, o);
    CHECK(r.curve.surviving_fraction[0] == 1.0);
    CHECK(r.curve.surviving_fraction[1] <= 1.0);
}

TEST_CASE("rate fit on exact log-linear data")
{
    SurvivalCurve c;
    c.replica_count = 1000000;
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.1 * i;
        c.times.push_back(t);
        c.surviving_fraction.push_back(std::exp(-2.0 * t));
        c.survivors.push_back(std::lround(c.replica_count * std::exp(-2.0 * t)));
    }
    const RateFit f = fit_rate(c, {0.05, 2.0});
    CHECK(std::abs(f.kappa_hat - 2.0) < 1e-12);
    CHECK(std::abs(f.log_intercept) < 1e-12);
    CHECK(f.stderr > 0.0);
    CHECK(f.points == 20);
}

TEST_CASE("rate fit needs four populated checkpoints")
{
    SurvivalCurve c;
    c.replica_count = 100;
    c.times = {1, 2, 3, 4, 5};
    c.surviving_fraction = {0.5, 0.4, 0.2, 0.1, 0.05};
    c.survivors = {50, 40, 20, 10, 5};
    CHECK_THROWS_AS(fit_rate(c, {0.0, 10.0}), FitWindowError);
}

TEST_CASE("default window is [median, 99th percentile]")
{
    std::vector<std::optional<double>> taus;
    for (int i = 1; i <= 100; ++i) taus.emplace_back(static_cast<double>(i));
    const FitWindow w = default_window(taus);
    CHECK(w.t_lo == 50.0);
    CHECK(w.t_hi == 99.0);
}

TEST_CASE("lattice sites of F")
{
    const auto all = lattice_sites(WholeCircle{}, 16);
    CHECK(all.size() == 16);
    CHECK(std::set<int>(all.begin(), all.end()).size() == 16);
    CHECK(all[0] == 0);
    CHECK(all[1] == 8);
    const auto arc = lattice_sites(Arc{0.0, 0.25}, 16);
    CHECK(std::set<int>(arc.begin(), arc.end()) == std::set<int>{0, 1, 2, 3});
    const auto pt = lattice_sites(PointSet{{CirclePoint(0.5)}}, 16);
    CHECK(pt == std::vector<int>{8});
}

TEST_CASE("entrance moment from two particles at one point is one")
{
    const EigenSolution e = fixation_rate(ModelParams{});
    EntranceOptions o;
    o.L = 16;
    o.replicas = 50;
    const EntranceEstimate est = entrance_moment(PointSet{{CirclePoint(0.25)}}, {2}, ModelParams{}, e, o);
    CHECK(est.value == 1.0);
    CHECK(est.stderr == 0.0);
    CHECK_FALSE(est.flagged);
    CHECK_THROWS_AS(entrance_moment(WholeCircle{}, {2}, ModelParams{1, 1, 1}, e, o), UnsupportedError);
    CHECK_THROWS_AS(entrance_moment(WholeCircle{}, {8, 4}, ModelParams{}, e, o), DomainError);
}

TEST_CASE("duality at t = 0 is exact")
{
    DualityOptions o;
    o.L = 16;
    o.replicas_spde = 10;
    o.replicas_dual = 10;
    DualConfiguration z;
    z.greens = {CirclePoint(0.125)};
    z.reds = {CirclePoint(0.625), CirclePoint(0.75)};
    const DualityReport r = duality_check(profiles::step(0.5), z, 0.0, ModelParams{1, 1, 1}, o);
    CHECK(r.lhs == r.rhs);
    CHECK(r.z_score == 0.0);
    CHECK(r.lhs == doctest::Approx(1.0));
}

TEST_CASE("duality with u0 = 1 has both sides zero")
{
    DualityOptions o;
    o.L = 16;
    o.replicas_spde = 100;
    o.replicas_dual = 100;
    o.bias_budget = false;
    const DualityReport r =
        duality_check(profiles::constant(1.0), DualConfiguration::pair(CirclePoint(0.0), CirclePoint(0.5)), 0.1,
                      ModelParams{}, o);
    CHECK(r.lhs == 0.0);
    CHECK(r.rhs == 0.0);
    CHECK(r.z_score == 0.0);
}

TEST_CASE("Girsanov factors")
{
    CHECK(girsanov_lower_factor(0.0, 1.0, 5.0) == 1.0);
    CHECK(girsanov_upper_factor(0.0, 1.0) == 1.0);
    CHECK(girsanov_lower_factor(1.0, 1.0, 1.0) == doctest::Approx(std::exp(-9.0 / 8.0)));
    CHECK(girsanov_upper_factor(1.0, 1.0) == doctest::Approx(std::exp(1.0)));
    double prev = 1.0;
    for (double t = 0.5; t < 10.0; t += 0.5) {
        const double f = girsanov_lower_factor(1.0, 1.0, t);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("Girsanov check at beta = 0 passes trivially")
{
    const LatticeField u0 = make_field(profiles::step(0.5), 8, 64);
    const GirsanovReport g = girsanov_check(u0, ModelParams{}, 0.5, 500);
    CHECK(g.p_zero == g.p_beta);
    CHECK(g.pass);
}

TEST_CASE("Fleming-Viot preconditions")
{
    const LatticeField u0 = make_field(profiles::step(0.5), 8, 64);
    FlemingViotOptions o;
    o.n_replicas = 50;
    CHECK_THROWS_AS(fleming_viot(u0, ModelParams{}, o), DomainError);
    o.n_replicas = 100;
    CHECK_THROWS_AS(fleming_viot(make_field(profiles::constant(0.0), 8, 64), ModelParams{}, o), StateError);
}

TEST_CASE("Fleming-Viot small run is symmetric and deterministic")
{
    const LatticeField u0 = make_field(profiles::step(0.5), 8, 64);
    FlemingViotOptions o;
    o.n_replicas = 100;
    o.horizon = 4.0;
    o.batches = 4;
    EnsembleOptions e1{5, 1, 0}, e3{5, 3, 0};
    const FlemingViotResult a = fleming_viot(u0, ModelParams{1.0, 0.0, 4.0}, o, e1);
    const FlemingViotResult b = fleming_viot(u0, ModelParams{1.0, 0.0, 4.0}, o, e3);
    CHECK(a.kappa_hat == b.kappa_hat);
    CHECK(a.two_point[2].value == b.two_point[2].value);
    CHECK(a.replacements > 0);
    for (const auto& p : a.one_point) CHECK(p.value == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("mean and standard error")
{
    const MeanStderr m = mean_stderr({1.0, 2.0, 3.0, 4.0});
    CHECK(m.mean == 2.5);
    CHECK(m.stderr == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
