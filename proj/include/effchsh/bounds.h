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

#ifndef EFFCHSH_BOUNDS_H
#define EFFCHSH_BOUNDS_H

// Exact (sum over lambda) correlations and CHSH-type combinations for SLHV
// models, together with the per-lambda vertex bound |u| <= 2 alpha beta.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "effchsh/angle.h"
#include "effchsh/lhv.h"

namespace effchsh {

/// How an effective (coincidence-normalized) correlation is tied to the model.
enum class EffectiveCorrelationMode {
    /// E / sum_rq P_rq, valid when non-detection is angle independent.
    SolutionI,
    /// E / ((1 - P0(a)) (1 - P0(b))), valid when non-detection is lambda independent.
    SolutionII,
    /// sum_lambda rho eps_eff(a) eps_eff(b) with per-lambda normalized averages.
    SolutionIII,
};

std::string mode_name(EffectiveCorrelationMode mode);
/// Accepts "solution1", "solution2", "solution3" (case-insensitive, also "I", "II", "III").
EffectiveCorrelationMode parse_mode(const std::string &text);

/// Whether mode preconditions are enforced or only reported.
enum class Enforcement { Strict, Permissive };

/// u = x (y - y') + x' (y + y').
double u_of(double x, double x_prime, double y, double y_prime);

struct VertexRow {
    int row_index = 0;
    /// Signs of (x, x', y, y') at the vertex (+-alpha, +-alpha', +-beta, +-beta').
    std::array<int, 4> signs{};
    double u_value = 0.0;
};

/// The 16 corners of the box |x|,|x'| <= alpha, |y|,|y'| <= beta, in the
/// classic row order: all minus, then one plus, two plus, three plus, all plus.
std::vector<VertexRow> enumerate_vertices(double alpha, double beta);

struct PointwiseBoundReport {
    bool passed = true;
    /// max over lambda of |u| - 2 alpha beta; <= 0 when the bound holds.
    double max_excess = 0.0;
    std::size_t worst_lambda = 0;
    double tolerance = 1e-12;
};

/// Checks |u(lambda)| <= 2 alpha(lambda) beta(lambda) for every lambda.
/// Throws PreconditionError unless non-detection is angle independent on the quad.
PointwiseBoundReport pointwise_bound_check(const SLHVModel &model, const SettingsQuad &quad);

/// E(a, b) = sum_i rho_i eps1(a, lambda_i) eps2(b, lambda_i).
double exact_correlation(const SLHVModel &model, Angle a, Angle b);

/// sum over r, q = +-1 of P_rq = sum_i rho_i alpha(a, lambda_i) beta(b, lambda_i).
double exact_coincidence_sum(const SLHVModel &model, Angle a, Angle b);

struct UResult {
    double U = 0.0;
    double M = 0.0;
    std::array<double, 4> correlation{};
    std::array<double, 4> coincidence_sum{};
    Solution1Report solution1;
    /// |U| <= M; only meaningful when solution1.passed.
    bool u_within_m = true;
    /// |U| <= 2 holds for every SLHV model.
    bool u_within_2 = true;
};

/// U = E(a,b) - E(a,b') + E(a',b) + E(a',b') and M = 2 sum_rq P_rq(a, b).
UResult compute_U(const SLHVModel &model, const SettingsQuad &quad);

double exact_effective_correlation(const SLHVModel &model, Angle a, Angle b, EffectiveCorrelationMode mode,
                                   Enforcement enforcement = Enforcement::Strict);

struct PairValues {
    PairIndex pair;
    Angle a;
    Angle b;
    double correlation = 0.0;
    double coincidence_sum = 0.0;
    double effective_correlation = 0.0;
};

struct LambdaDetail {
    std::size_t index = 0;
    double point = 0.0;
    double u = 0.0;
    /// 2 alpha beta at the quad's first settings.
    double bound = 0.0;
};

struct InequalityReport {
    EffectiveCorrelationMode mode = EffectiveCorrelationMode::SolutionI;
    SettingsQuad quad;
    std::array<PairValues, 4> pairs{};
    double U = 0.0;
    double M = 0.0;
    double U_eff = 0.0;

    Solution1Report solution1;
    Solution2Report solution2;
    /// Assumption behind the selected mode holds.
    bool assumption_passed = false;
    std::string assumption_name;

    std::optional<PointwiseBoundReport> pointwise;
    std::optional<bool> u_within_m;
    bool u_within_2 = true;
    bool u_eff_within_2 = true;
    double tolerance = 1e-12;

    std::vector<LambdaDetail> lambda_details;

    /// Any proven bound failed while its assumption held.
    bool theorem_breach() const;
    /// "bound holds", "assumptions violated; bound not guaranteed" or "theorem breach".
    std::string verdict() const;
};

/// Full report. Runs even when the mode's assumption fails, in which case the
/// verdict says the bound is not guaranteed. Throws DegenerateModelError on
/// zero denominators.
InequalityReport compute_U_eff(const SLHVModel &model, const SettingsQuad &quad, EffectiveCorrelationMode mode);

/// verbosity >= 2 adds per-lambda u and 2 alpha beta.
nlohmann::json to_json(const InequalityReport &report, int verbosity = 0);
nlohmann::json to_json(const Solution1Report &report);
nlohmann::json to_json(const Solution2Report &report);

}  // namespace effchsh

#endif  // EFFCHSH_BOUNDS_H
