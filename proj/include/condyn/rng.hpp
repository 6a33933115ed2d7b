// Copyright 2026 The condyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CONDYN_RNG_HPP
#define CONDYN_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>

namespace condyn {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11), as in Random123.
///
/// Counter-based: the output is a pure function of (key, counter), so any
/// draw can be recomputed without replaying the stream.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Identifier recorded in run manifests.
inline constexpr const char *kRngAlgorithm =
    "philox4x32-10; key=(seed_lo32, seed_hi32); counter=(stream_lo32, stream_hi32, step, draw); "
    "uniform=(hi64 >> 11) * 2^-53 with hi64=(word1 << 32 | word0)";

/// Deterministic draws for one (seed, stream) pair, addressed by (step, draw).
///
/// Each call to uniform() consumes one counter value. A trajectory uses
/// stream = trajectory index and advances `step` once per measurement step.
class CounterRng {
   public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    void seek(std::uint32_t step) {
        step_ = step;
        draw_ = 0;
    }
    std::uint32_t step() const { return step_; }

    /// 64 random bits for the current (step, draw); advances draw, rolling into the next step on overflow.
    std::uint64_t next_u64();
    /// Uniform double in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // UniformRandomBitGenerator interface.
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return next_u64(); }

   private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint32_t step_ = 0;
    std::uint32_t draw_ = 0;
};

}  // namespace condyn

#endif  // CONDYN_RNG_HPP
