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

#ifndef EFFCHSH_LHV_H
#define EFFCHSH_LHV_H

// Stochastic local hidden-variable (SLHV) models with non-detection.
//
// Each party answers a polarizer setting and a hidden variable lambda with a
// probability triple over {+1, -1, no detection}. Joint probabilities are
// only ever formed as products of the two single-party triples, so a model
// cannot express a nonlocal response.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "effchsh/angle.h"

namespace effchsh {

enum class Party { One = 1, Two = 2 };

enum class Outcome { Plus = 0, Minus = 1, NoDetect = 2 };

inline constexpr std::array<Outcome, 3> kAllOutcomes = {Outcome::Plus, Outcome::Minus, Outcome::NoDetect};

/// Numeric weight of an outcome in averages: +1, -1, 0.
constexpr int outcome_value(Outcome o) { return o == Outcome::Plus ? 1 : (o == Outcome::Minus ? -1 : 0); }

constexpr int party_number(Party p) { return static_cast<int>(p); }

struct ProbTriple {
    double plus = 0.0;
    double minus = 0.0;
    double zero = 1.0;

    double operator[](Outcome o) const {
        switch (o) {
            case Outcome::Plus:
                return plus;
            case Outcome::Minus:
                return minus;
            case Outcome::NoDetect:
                return zero;
        }
        return 0.0;
    }
    double sum() const { return plus + minus + zero; }
};

/// Ideal (lossless) two-channel response.
struct TwoOutcome {
    double plus = 0.5;
    double minus = 0.5;
};

struct Tolerances {
    double normalization = 1e-12;
    double assumption = 1e-10;
};

/// Discrete hidden-variable space: points with a normalized weight each.
class HiddenVariableSpace {
   public:
    HiddenVariableSpace(std::vector<double> points, std::vector<double> weights, double tol = 1e-12);

    /// n equally weighted points k*pi/n, k = 0..n-1.
    static HiddenVariableSpace uniform_grid(std::size_t n);

    std::size_t size() const { return weights_.size(); }
    double point(std::size_t i) const { return points_.at(i); }
    double weight(std::size_t i) const { return weights_.at(i); }
    std::span<const double> points() const { return points_; }
    std::span<const double> weights() const { return weights_; }

   private:
    std::vector<double> points_;
    std::vector<double> weights_;
};

/// Single-party response (p+, p-, p0) as a function of (setting, lambda index).
///
/// Either supplied directly as triples, or in split form as an ideal
/// two-channel response times per-channel detection efficiencies:
/// p_r = p_r,ideal * eta_r and p0 = 1 - sum_r p_r.
class ResponseFunction {
   public:
    using TripleFn = std::function<ProbTriple(Angle, std::size_t)>;
    using IdealFn = std::function<TwoOutcome(Angle, std::size_t)>;
    using EfficiencyFn = std::function<double(Angle, std::size_t, Outcome)>;
    using ChannelBlindEfficiencyFn = std::function<double(Angle, std::size_t)>;

    static ResponseFunction direct(TripleFn fn);
    static ResponseFunction split(IdealFn ideal, EfficiencyFn efficiency);
    /// Same efficiency in both channels.
    static ResponseFunction split(IdealFn ideal, ChannelBlindEfficiencyFn efficiency);
    /// Lookup table keyed by setting; each entry holds one triple per lambda.
    static ResponseFunction tabulated(std::vector<std::pair<Angle, std::vector<ProbTriple>>> table);

    bool has_split_form() const { return static_cast<bool>(ideal_); }
    TwoOutcome ideal(Angle angle, std::size_t lambda) const;
    double efficiency(Angle angle, std::size_t lambda, Outcome r) const;

    /// Unchecked triple. SLHVModel::response is the validated entry point.
    ProbTriple raw(Angle angle, std::size_t lambda) const;

    /// Settings at which a tabulated response is defined; empty otherwise.
    const std::vector<Angle> &tabulated_angles() const { return tabulated_angles_; }

   private:
    TripleFn triple_;
    IdealFn ideal_;
    EfficiencyFn efficiency_;
    std::vector<Angle> tabulated_angles_;
};

class SLHVModel {
   public:
    SLHVModel(HiddenVariableSpace space, ResponseFunction response1, ResponseFunction response2,
              Tolerances tolerances = {});

    const HiddenVariableSpace &space() const { return space_; }
    const ResponseFunction &responder(Party p) const { return p == Party::One ? response1_ : response2_; }
    const Tolerances &tolerances() const { return tolerances_; }

   private:
    HiddenVariableSpace space_;
    ResponseFunction response1_;
    ResponseFunction response2_;
    Tolerances tolerances_;
};

/// Tabulates both responses at the given settings (duplicates collapse).
/// The copy answers only those settings but evaluates each one once.
SLHVModel restrict_to(const SLHVModel &model, std::span<const Angle> angles1, std::span<const Angle> angles2);
SLHVModel restrict_to(const SLHVModel &model, const SettingsQuad &quad);

/// Validated (p+, p-, p0) for one party. Throws IndexError or ValidationError.
ProbTriple response(const SLHVModel &model, Party party, Angle angle, std::size_t lambda);

double nondetect_prob(const SLHVModel &model, Party party, Angle angle, std::size_t lambda);

/// Detection probability p+ + p-; called beta for party 2.
double alpha(const SLHVModel &model, Party party, Angle angle, std::size_t lambda);

double joint_prob(const SLHVModel &model, Angle a, Angle b, std::size_t lambda, Outcome r, Outcome q);

/// p+ - p-. Non-detection contributes zero.
double local_average(const SLHVModel &model, Party party, Angle angle, std::size_t lambda);

/// (p+ - p-) / (1 - p0): the average over detected events only.
/// Throws DegenerateModelError when p0 == 1.
double effective_local_average(const SLHVModel &model, Party party, Angle angle, std::size_t lambda);

/// Angle-independence of non-detection at each lambda.
struct Solution1Report {
    bool passed = true;
    /// max over (party, lambda) of max_angle p0 - min_angle p0.
    double deviation = 0.0;
    double tolerance = 0.0;
    std::optional<Party> worst_party;
    std::size_t worst_lambda = 0;
    Angle worst_angle_low;
    Angle worst_angle_high;
};

Solution1Report validate_solution1(const SLHVModel &model, std::span<const Angle> angles1,
                                   std::span<const Angle> angles2);
/// Checks the four settings of the quad only.
Solution1Report validate_solution1(const SLHVModel &model, const SettingsQuad &quad);

struct ImpliedNondetection {
    Party party;
    Angle angle;
    /// rho-weighted mean of p0 over lambda; equals the constant value on pass.
    double p0;
};

/// Lambda-independence of non-detection at each setting.
struct Solution2Report {
    bool passed = true;
    /// max over (party, angle) of max_lambda p0 - min_lambda p0.
    double deviation = 0.0;
    double tolerance = 0.0;
    std::optional<Party> worst_party;
    Angle worst_angle;
    std::vector<ImpliedNondetection> implied_p0;

    /// Implied experimental P0 at (party, angle). Throws DomainError if absent.
    double p0_at(Party party, Angle angle) const;
};

Solution2Report validate_solution2(const SLHVModel &model, std::span<const Angle> angles1,
                                   std::span<const Angle> angles2);
Solution2Report validate_solution2(const SLHVModel &model, const SettingsQuad &quad);

}  // namespace effchsh

#endif  // EFFCHSH_LHV_H
