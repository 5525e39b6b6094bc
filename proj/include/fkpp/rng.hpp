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

#include <array>
#include <cstdint>
#include <limits>

namespace fkpp {

/// Purpose tags for the high bits of a stream id. Changing a value changes
/// every seeded output that depends on it.
enum class StreamTag : std::uint64_t {
    SpdeReplica = 1,
    DualReplica = 2,
    FlemingViotDriver = 3,
    FlemingViotReplica = 4,
    EntranceReplica = 5,
    EulerReplica = 6,
    KingmanReplica = 7,
    Scratch = 15,
};

/// Stream id layout: tag in bits 56..63, case in bits 32..55, replica index
/// in the low 32 bits.
constexpr std::uint64_t stream_id(StreamTag tag, std::uint64_t replica,
                                  std::uint64_t case_index = 0) noexcept
{
    return (static_cast<std::uint64_t>(tag) << 56) |
           ((case_index & 0xFFFFFFull) << 32) | (replica & 0xFFFFFFFFull);
}

/**
 * xoshiro256++ stream keyed by (master seed, stream id).
 *
 * The 256-bit state is the SplitMix64 expansion of a hash of the pair, so a
 * stream depends only on its key and never on scheduling. Satisfies
 * UniformRandomBitGenerator, which lets Boost.Random distributions draw
 * from it directly.
 */
class RngStream {
public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t master_seed, std::uint64_t stream);

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_pos() noexcept
    {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), n < 2^32.
    std::uint32_t below(std::uint32_t n) noexcept
    {
        return static_cast<std::uint32_t>(((*this)() >> 32) * n >> 32);
    }

    double exponential() noexcept;
    double normal() noexcept;
    double gamma(double shape) noexcept;
    double beta(double a, double b) noexcept;
    long poisson(double mean) noexcept;
    int binomial(int n, double p) noexcept;

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_;
    std::uint64_t stream_;
};

/// SplitMix64 finalizer, exposed for hashing config strings into seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

} // namespace fkpp
