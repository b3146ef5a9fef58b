// Copyright 2026 The effchsh Authors
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

#ifndef EFFCHSH_RNG_H
#define EFFCHSH_RNG_H

#include <cstdint>

namespace effchsh {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: the i-th draw of a stream with key k is
/// mix64(k + i * 0x9e3779b97f4a7c15), i = 1, 2, ...
///
/// Any draw can be recomputed from (key, counter) alone, which is what makes
/// block-parallel sampling independent of the worker count.
class CounterRng {
   public:
    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

    explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

    /// Stream for (seed, a, b): key = mix64(mix64(mix64(seed) ^ (a + 1) * G) ^ (b + 1) * G').
    static constexpr CounterRng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        std::uint64_t k = mix64(seed);
        k = mix64(k ^ ((a + 1) * kGamma));
        k = mix64(k ^ ((b + 1) * 0xd1b54a32d192ed03ULL));
        return CounterRng(k);
    }

    constexpr std::uint64_t next_u64() {
        ++counter_;
        return mix64(key_ + counter_ * kGamma);
    }

    /// Uniform on [0, 1) with 53 random bits.
    constexpr double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    constexpr std::uint64_t key() const { return key_; }
    constexpr std::uint64_t counter() const { return counter_; }

   private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace effchsh

#endif  // EFFCHSH_RNG_H
