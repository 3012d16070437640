// SPDX-License-Identifier: Apache-2.0
//
// selmimo - selective uplink training simulator for massive MIMO
// Copyright (C) 2026 The selmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SELMIMO_RNG_HPP
#define SELMIMO_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace selmimo
{

/// SplitMix64 finalizer, used to mix seeds and substream labels.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Substream purposes. The numeric values are part of the reproducibility
// contract: changing them changes every seeded result.
enum class StreamPurpose : std::uint64_t
{
    user_drop = 1,      // user positions for one drop
    channel = 2,        // channel initialization / innovation per block
    training_noise = 3, // additive noise on the training observation
    selection = 4,      // randomized selection policies
    generic = 5,        // tests and ad-hoc sampling
};

/// Addresses one derived substream: (purpose, drop, realization, block).
struct StreamLabel
{
    StreamPurpose purpose = StreamPurpose::generic;
    std::uint64_t drop = 0;
    std::uint64_t realization = 0;
    std::uint64_t block = 0;
};

/// A self-contained random stream. All distributions are generated from raw
/// 64-bit engine output with fixed algorithms, so a given (seed, label)
/// yields identical draws on every platform and thread schedule.
class RngStream
{
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n)
    {
        if (n == 0)
            throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t threshold = (0 - n) % n; // 2^64 mod n
        for (;;)
        {
            const std::uint64_t r = engine_();
            if (r >= threshold)
                return r % n;
        }
    }

    /// Circularly-symmetric complex Gaussian CN(0, variance).
    /// Consumes exactly two uniforms per draw.
    std::complex<double> complex_normal(double variance)
    {
        const double u1 = uniform();
        const double u2 = uniform();
        const double magnitude = std::sqrt(-variance * std::log1p(-u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::polar(magnitude, two_pi * u2);
    }

  private:
    std::mt19937_64 engine_;
};

/// Derives a statistically independent substream from a master seed and a
/// label tuple. Same (seed, label) gives the same stream; substreams are
/// independent regardless of the order or thread in which they are used.
inline RngStream derive_stream(std::uint64_t seed, const StreamLabel &label)
{
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(label.purpose));
    h = splitmix64(h ^ label.drop);
    h = splitmix64(h ^ label.realization);
    h = splitmix64(h ^ label.block);
    return RngStream(h);
}

} // namespace selmimo

#endif
