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

#ifndef EFFCHSH_NUMERIC_H
#define EFFCHSH_NUMERIC_H

#include <cstddef>
#include <span>

namespace effchsh {

/// Pairwise (cascade) summation with a fixed split order, so the result
/// depends only on the input sequence and never on how work was scheduled.
inline double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kLeaf = 16;
    if (xs.size() <= kLeaf) {
        double s = 0.0;
        for (double x : xs) {
            s += x;
        }
        return s;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace effchsh

#endif  // EFFCHSH_NUMERIC_H
