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
#include <vector>

#include "fkpp/circle.hpp"
#include "fkpp/dual.hpp"
#include "fkpp/rng.hpp"

using namespace fkpp;

namespace {

DualConfiguration spread(int n, int reds, int L)
{
    DualConfiguration z;
    for (int i = 0; i < n; ++i) {
        const CirclePoint x(static_cast<double>((i * 7) % L) / L);
        (i < reds ? z.reds : z.greens).push_back(x);
    }
    return z;
}

} // namespace

TEST_CASE("particle count never increases without branching")
{
    const LatticeDual dual(ModelParams{1.0, 0.0, 5.0}, 16);
    RngStream rng(1, 1);
    DualConfiguration z = spread(12, 4, 16);
    std::size_t prev = z.size();
    for (int i = 0; i < 20000 && !z.killed; ++i) {
        z = dual.step(z, rng);
        CHECK(z.size() <= prev);
        prev = z.size();
    }
}

TEST_CASE("run() keeps the count non-increasing at the checkpoints")
{
    const LatticeDual dual(ModelParams{1.0, 0.0, 1.0}, 32);
    DualOptions o;
    o.stop = StopRule::Never;
    for (int k = 1; k <= 40; ++k) o.checkpoints.push_back(0.05 * k);
    for (int r = 0; r < 50; ++r) {
        RngStream rng(2, stream_id(StreamTag::Scratch, static_cast<std::uint64_t>(r)));
        const DualOutcome out = dual.run(DualConfiguration::colorblind_points(spread(20, 0, 32).greens), 2.0, rng, o);
        REQUIRE(out.series.size() == 40);
        for (std::size_t i = 1; i < out.series.size(); ++i)
            CHECK(out.series[i].n_green <= out.series[i - 1].n_green);
    }
}

TEST_CASE("color-blind systems are never killed")
{
    const LatticeDual dual(ModelParams{1.0, 0.0, 10.0}, 8);
    RngStream rng(3, 1);
    DualOptions o;
    o.stop = StopRule::Never;
    const DualOutcome out = dual.run(DualConfiguration::colorblind_points(spread(6, 0, 8).greens), 5.0, rng, o);
    CHECK_FALSE(out.final_state.killed);
    CHECK_FALSE(out.tau_partial);
    CHECK(out.final_state.size() >= 1);
}

TEST_CASE("two-colour pair: meeting precedes killing")
{
    const LatticeDual dual(ModelParams{}, 32);
    for (int r = 0; r < 200; ++r) {
        RngStream rng(4, stream_id(StreamTag::Scratch, static_cast<std::uint64_t>(r)));
        const DualOutcome out = dual.run(DualConfiguration::pair(CirclePoint(0.0), CirclePoint(0.5)), 100.0, rng);
        REQUIRE(out.tau_partial);
        REQUIRE(out.tau_meet);
        CHECK(*out.tau_meet <= *out.tau_partial);
        CHECK(out.final_state.killed);
        CHECK(out.final_state.reds.empty());
    }
}

TEST_CASE("zero horizon returns the initial configuration")
{
    const LatticeDual dual(ModelParams{}, 16);
    RngStream rng(5, 1);
    DualOptions o;
    o.checkpoints = {0.0};
    o.record_configurations = true;
    const DualConfiguration z0 = spread(3, 1, 16);
    const DualOutcome out = dual.run(z0, 0.0, rng, o);
    REQUIRE(out.configurations.size() == 1);
    CHECK(out.configurations[0].greens.size() == z0.greens.size());
    CHECK(out.configurations[0].reds.size() == z0.reds.size());
    CHECK(out.final_state.time == 0.0);
}

TEST_CASE("without coalescence the count only grows")
{
    const LatticeDual dual(ModelParams{1.0, 2.0, 1.0}, 16);
    RngStream rng(6, 1);
    DualOptions o;
    o.stop = StopRule::Never;
    o.coalescence = false;
    o.checkpoints = {0.5, 1.0};
    const DualOutcome out = dual.run(spread(4, 2, 16), 1.0, rng, o);
    REQUIRE(out.series.size() == 2);
    CHECK(out.series[0].n_green + out.series[0].n_red >= 4);
    CHECK(out.series[1].n_green + out.series[1].n_red >= out.series[0].n_green + out.series[0].n_red);
}

TEST_CASE("E[N_1] / n decreases in n under branching")
{
    const LatticeDual dual(ModelParams{1.0, 1.0, 1.0}, 64);
    DualOptions o;
    o.stop = StopRule::Never;
    o.checkpoints = {1.0};
    double prev = 1e9;
    for (int n : {2, 8, 32}) {
        double sum = 0.0;
        const int runs = 1000;
        for (int r = 0; r < runs; ++r) {
            RngStream rng(7, stream_id(StreamTag::Scratch, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(n)));
            const DualOutcome out = dual.run(DualConfiguration::colorblind_points(spread(n, 0, 64).greens), 1.0, rng, o);
            sum += out.series.at(0).n_green;
        }
        const double ratio = sum / runs / n;
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("tau_1 for two particles at one site is zero")
{
    const LatticeDual dual(ModelParams{}, 16);
    RngStream rng(8, 1);
    DualOptions o;
    o.stop = StopRule::AtTau1;
    const DualOutcome out =
        dual.run(DualConfiguration::colorblind_points({CirclePoint(0.25), CirclePoint(0.25)}), 10.0, rng, o);
    REQUIRE(out.tau_one);
    CHECK(*out.tau_one == 0.0);
}

TEST_CASE("continuous dual coalescence probabilities")
{
    const ModelParams p{};
    const double delta = 1e-4;
    const ContinuousDual dual(p, delta);
    double prev = dual.pair_probability(0.0);
    CHECK(prev == doctest::Approx(dual.max_pair_probability()));
    CHECK(prev == doctest::Approx(1.0 - std::exp(-local_time_window_mean(0.0, delta, 2.0) / 2.0)).epsilon(1e-9));
    for (int i = 1; i <= 100; ++i) {
        const double q = dual.pair_probability(0.002 * i);
        CHECK(q <= prev);
        CHECK(q >= 0.0);
        prev = q;
    }
    CHECK(dual.pair_probability(0.5) < 1e-15);
}

TEST_CASE("total coalescence rate: local time grows like sqrt(delta)")
{
    // The window local time at contact is 2 sqrt(T / (2 pi)) with T = 2 alpha delta.
    for (double delta : {1e-6, 1e-5, 1e-4}) {
        const double l0 = local_time_window_mean(0.0, delta, 2.0);
        CHECK(l0 == doctest::Approx(2.0 * std::sqrt(2.0 * delta / (2.0 * M_PI))).epsilon(1e-8));
    }
}

TEST_CASE("continuous dual never gains particles without branching")
{
    const ContinuousDual dual(ModelParams{1.0, 0.0, 20.0}, 1e-4);
    RngStream rng(9, 1);
    DualConfiguration z = spread(8, 3, 64);
    std::size_t prev = z.size();
    for (int i = 0; i < 5000 && !z.killed; ++i) {
        z = dual.step(z, rng);
        CHECK(z.size() <= prev);
        prev = z.size();
    }
}

TEST_CASE("phi_bar")
{
    EigenSolution e = fixation_rate(ModelParams{});
    e.M_star = 0.2;
    const DualConfiguration z = DualConfiguration::pair(CirclePoint(0.1), CirclePoint(0.35));
    CHECK(phi_bar(z, e) == doctest::Approx(0.2 * std::cos(2.0 * e.theta_star * 0.25)));
    DualConfiguration k = z;
    k.killed = true;
    CHECK(phi_bar(k, e) == 0.0);
    CHECK_THROWS_AS(phi_bar(spread(3, 1, 16), e), UnsupportedError);
}

TEST_CASE("martingale functional needs configurations")
{
    EigenSolution e = fixation_rate(ModelParams{});
    e.M_star = 1.0;
    DualOutcome alive;
    alive.final_state = DualConfiguration::pair(CirclePoint(0.0), CirclePoint(0.5));
    CHECK_THROWS_AS(martingale_functional({alive}, e, {1.0}), StateError);
    DualOutcome dead;
    dead.tau_partial = 0.5;
    const auto pts = martingale_functional({dead}, e, {1.0});
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].mean == 0.0);
}

TEST_CASE("negative branching rate is rejected")
{
    CHECK_THROWS_AS(LatticeDual(ModelParams{1.0, -1.0, 1.0}, 16), DomainError);
    CHECK_THROWS_AS(ContinuousDual(ModelParams{1.0, -1.0, 1.0}, 1e-3), DomainError);
}
