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

#ifndef EFFCHSH_ADVERSARY_H
#define EFFCHSH_ADVERSARY_H

// Derivative-free search for SLHV models whose coincidence-normalized CHSH
// combination |U_eff| exceeds 2. Every evaluation is exact (no sampling).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "effchsh/bounds.h"
#include "effchsh/families.h"

namespace effchsh {

struct SearchConfig {
    AdversaryFamily family;
    SettingsQuad quad = SettingsQuad::standard();
    EffectiveCorrelationMode mode = EffectiveCorrelationMode::SolutionI;
    int restarts = 20;
    /// Per restart.
    int max_evals = 2000;
    std::uint64_t seed = 0;
    std::size_t grid = kDefaultAdversaryGrid;
    /// 0 uses the hardware concurrency. Does not affect results.
    unsigned workers = 1;

    /// Throws DomainError unless restarts >= 1 and max_evals >= 10.
    void validate() const;
};

struct ObjectiveValue {
    /// |U_eff|, or 0 when degenerate.
    double value = 0.0;
    double u_eff = 0.0;
    /// Some setting pair had no coincidences.
    bool degenerate = false;
    bool projected = false;
    bool solution1_passed = false;
};

/// |U_eff| of the instantiated model. Throws DomainError outside the box.
ObjectiveValue objective(const AdversaryFamily &family, std::span<const double> params, const SettingsQuad &quad,
                         EffectiveCorrelationMode mode = EffectiveCorrelationMode::SolutionI,
                         std::size_t grid = kDefaultAdversaryGrid);

struct RestartSummary {
    int restart = 0;
    std::vector<double> start;
    std::vector<double> best_parameters;
    double best_value = 0.0;
    int evaluations = 0;
    bool exhausted = false;
    /// Best |U_eff| after each iteration; non-decreasing.
    std::vector<double> best_trace;
    /// Evaluations where angle-independent non-detection held.
    long solution1_evaluations = 0;
    /// Of those, how many exceeded 2 + 1e-9 (should be zero).
    long soundness_violations = 0;
};

struct AdversaryResult {
    std::string family;
    std::vector<std::string> parameter_names;
    std::vector<double> lower;
    std::vector<double> upper;
    SettingsQuad quad;
    EffectiveCorrelationMode mode = EffectiveCorrelationMode::SolutionI;
    std::size_t grid = 0;
    std::uint64_t seed = 0;

    std::vector<double> best_parameters;
    double best_abs_u_eff = 0.0;
    double best_u_eff = 0.0;
    int best_restart = 0;
    bool projected = false;
    long evaluation_count = 0;
    /// Some restart ran out of evaluations before converging.
    bool exhausted = false;
    Solution1Report solution1;
    Solution2Report solution2;
    long solution1_evaluations = 0;
    long soundness_violations = 0;
    std::vector<RestartSummary> restarts;
};

/// Nelder-Mead on -|U_eff| from seeded random starts inside the box; the
/// restart with the largest value wins, ties to the lowest index.
AdversaryResult search(const SearchConfig &config);

nlohmann::json to_json(const AdversaryResult &result);

}  // namespace effchsh

#endif  // EFFCHSH_ADVERSARY_H
