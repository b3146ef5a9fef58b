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

#ifndef EFFCHSH_SAMPLER_H
#define EFFCHSH_SAMPLER_H

// Seeded Monte Carlo generation of trial-by-trial records, including
// non-detections, from an SLHV model or the phenomenological QM model.
//
// Determinism: trials for setting pair p are cut into blocks of kBlockSize;
// block k of pair p draws from CounterRng::substream(seed, p, k). Counts are
// summed block by block in index order, so results do not depend on the
// number of workers.

#include <array>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "json.hpp"

#include "effchsh/angle.h"
#include "effchsh/estimator.h"
#include "effchsh/lhv.h"
#include "effchsh/qm.h"
#include "effchsh/rng.h"

namespace effchsh {

inline constexpr std::uint64_t kBlockSize = 1ULL << 16;

struct TrialOutcome {
    Outcome r = Outcome::NoDetect;
    Outcome q = Outcome::NoDetect;

    friend bool operator==(const TrialOutcome &, const TrialOutcome &) = default;
};

class ExperimentPlan {
   public:
    /// Throws DomainError when trials_per_pair == 0.
    ExperimentPlan(SettingsQuad quad, std::uint64_t trials_per_pair, std::uint64_t seed);

    const SettingsQuad &quad() const { return quad_; }
    std::uint64_t trials_per_pair() const { return trials_; }
    std::uint64_t seed() const { return seed_; }

   private:
    SettingsQuad quad_;
    std::uint64_t trials_;
    std::uint64_t seed_;
};

/// Precomputed per-lambda triples and the cumulative lambda distribution
/// for one setting pair.
class SlhvPairSampler {
   public:
    SlhvPairSampler(const SLHVModel &model, Angle a, Angle b);
    TrialOutcome operator()(CounterRng &rng) const;

   private:
    std::vector<double> cumulative_;
    std::vector<ProbTriple> party1_;
    std::vector<ProbTriple> party2_;
};

/// Photon k is detected with probability eta_k f_k, independently. Two
/// detections follow the joint law 1/4 [1 + rq F cos 2(a - b)]; a lone
/// detection is +1 or -1 with probability 1/2 each.
class QmPairSampler {
   public:
    QmPairSampler(const QMModelParams &params, Angle a, Angle b);
    /// Raw per-photon detection probabilities eta_k * f_k; zero is allowed here.
    QmPairSampler(double detect1, double detect2, double F, Angle a, Angle b);
    TrialOutcome operator()(CounterRng &rng) const;

   private:
    double detect1_;
    double detect2_;
    double same_sign_;
};

/// Draws lambda from rho, then each party's outcome from its own triple.
TrialOutcome sample_slhv_trial(const SLHVModel &model, Angle a, Angle b, CounterRng &rng);
TrialOutcome sample_qm_trial(const QMModelParams &params, Angle a, Angle b, CounterRng &rng);

using Source = std::variant<std::reference_wrapper<const SLHVModel>, QMModelParams>;

struct ExperimentResult {
    std::array<CountsRecord, 4> records;
    std::uint64_t seed = 0;
    std::uint64_t trials_per_pair = 0;
    std::uint64_t blocks_per_pair = 0;
};

/// Tallies the 3x3 outcome table for each of the four setting pairs.
/// workers == 0 uses the hardware concurrency.
ExperimentResult run_experiment(const Source &source, const ExperimentPlan &plan, unsigned workers = 1);

/// Sidecar for a counts CSV: plan, seed, substream scheme, source and per-pair settings.
nlohmann::json sidecar_json(const ExperimentResult &result, const ExperimentPlan &plan,
                            const nlohmann::json &source_description);

/// Restores settings and emitted totals from a sidecar onto CSV records.
void apply_sidecar(std::array<CountsRecord, 4> &records, const nlohmann::json &sidecar);

}  // namespace effchsh

#endif  // EFFCHSH_SAMPLER_H
