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

#include "fkpp/rng.hpp"

#include <cmath>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>

namespace fkpp {

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream)
    : seed_(master_seed), stream_(stream)
{
    std::uint64_t sm = mix64(master_seed) ^ mix64(stream ^ 0x5851F42D4C957F2Dull);
    for (auto& w : s_) {
        sm += 0x9E3779B97F4A7C15ull;
        w = mix64(sm);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

double RngStream::exponential() noexcept
{
    // Boost's exponential is a ziggurat; std's is log-based and slower.
    static thread_local boost::random::exponential_distribution<double> dist(1.0);
    return dist(*this);
}

double RngStream::normal() noexcept
{
    static thread_local boost::random::normal_distribution<double> dist(0.0, 1.0);
    return dist(*this);
}

double RngStream::gamma(double shape) noexcept
{
    boost::random::gamma_distribution<double> dist(shape, 1.0);
    return dist(*this);
}

double RngStream::beta(double a, double b) noexcept
{
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
}

long RngStream::poisson(double mean) noexcept
{
    if (mean <= 0.0) return 0;
    boost::random::poisson_distribution<long, double> dist(mean);
    return dist(*this);
}

int RngStream::binomial(int n, double p) noexcept
{
    if (n <= 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const bool flip = p > 0.5;
    const double q = flip ? 1.0 - p : p;
    int k;
    if (n * q < 14.0) {
        // Inversion from zero; the expected loop count is about n*q.
        const double s = q / (1.0 - q);
        const double a = (n + 1) * s;
        double r = std::exp(n * std::log1p(-q));
        double u = uniform();
        k = 0;
        while (u > r && k < n) {
            u -= r;
            ++k;
            r *= a / k - s;
        }
    } else {
        boost::random::binomial_distribution<int, double> dist(n, q);
        k = dist(*this);
    }
    return flip ? n - k : k;
}

} // namespace fkpp
