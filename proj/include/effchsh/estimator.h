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

#ifndef EFFCHSH_ESTIMATOR_H
#define EFFCHSH_ESTIMATOR_H

// Effective correlations from coincidence counts, their plug-in binomial
// standard errors, and the decomposition relating full-sample and
// coincidence-normalized CHSH combinations.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "effchsh/angle.h"
#include "effchsh/lhv.h"
#include "effchsh/qm.h"

namespace effchsh {

/// n[r][q] indexed by Outcome (Plus, Minus, NoDetect).
using CountsTable = std::array<std::array<std::uint64_t, 3>, 3>;

/// Outcome counts for one setting pair.
struct CountsRecord {
    PairIndex pair = PairIndex::AB;
    /// Settings, when known (simulation output or a sidecar).
    std::optional<std::pair<Angle, Angle>> settings;
    CountsTable n{};
    /// Emitted pairs, including those with no detection at all. Unobservable
    /// in a real photonic experiment.
    std::optional<std::uint64_t> emitted_total;

    std::uint64_t count(Outcome r, Outcome q) const {
        return n[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)];
    }
    std::uint64_t &count(Outcome r, Outcome q) { return n[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)]; }
    std::uint64_t coincidences() const;
    std::uint64_t table_sum() const;
    /// Throws ValidationError if emitted_total disagrees with the table.
    void validate() const;
};

using RecordQuad = std::span<const CountsRecord, 4>;

/// sum rq N_rq / sum N_rq over doubly detected events. Throws NoDataError.
double e_eff_from_counts(const CountsRecord &rec);

struct EffEstimate {
    double e_eff = 0.0;
    /// sqrt((1 - e_eff^2) / N_c): each coincidence is a +-1 draw.
    double std_error = 0.0;
    std::uint64_t coincidences = 0;
};

EffEstimate estimate_e_eff(const CountsRecord &rec);

struct UEffEstimate {
    double u_eff = 0.0;
    /// Per-term errors combined in quadrature, assuming independent pairs.
    double std_error = 0.0;
    std::array<EffEstimate, 4> per_pair{};
};

/// Records must be ordered ab, ab', a'b, a'b'.
UEffEstimate u_eff_from_counts(RecordQuad recs);

struct EpsilonReport {
    std::array<double, 4> eps{};
    /// E over all emitted pairs, per setting pair.
    std::array<double, 4> correlation{};
    /// Fraction of emitted pairs that were coincidences.
    std::array<double, 4> coincidence_fraction{};
    std::array<double, 4> e_eff{};
    double eps_total = 0.0;
    double U = 0.0;
    double U_eff = 0.0;
    double lower = -2.0;
    double upper = 2.0;
    bool within_interval = true;
};

/// eps_kl = E (1 - S) / S with S the coincidence fraction; eps_total combines
/// them with the CHSH sign pattern so that U = U_eff - eps_total. Throws
/// UnavailableError when any emitted total is missing.
EpsilonReport epsilon_decomposition(RecordQuad recs);

/// (1 - eta1 eta2 f12) U_eff.
double qm_epsilon_identity(const QMModelParams &params, double u_eff);

/// Sampler CSV: header "pair_label,r,q,count", rows ordered by pair, r, q.
void write_counts_csv(std::ostream &os, RecordQuad recs);

/// Accepts the full nine-cell schema and a variant with only the four
/// coincidence cells per pair. emitted_total is set only for pairs with all
/// nine cells. Throws InputError.
std::array<CountsRecord, 4> read_counts_csv(std::istream &is);

nlohmann::json analysis_json(RecordQuad recs);

}  // namespace effchsh

#endif  // EFFCHSH_ESTIMATOR_H
