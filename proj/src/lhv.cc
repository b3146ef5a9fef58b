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

#include "effchsh/lhv.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "effchsh/numeric.h"

namespace effchsh {

namespace {

std::string where(Party party, Angle angle, std::size_t lambda) {
    std::ostringstream os;
    os << "party " << party_number(party) << ", angle " << angle.deg() << " deg, lambda " << lambda;
    return os.str();
}

bool in_unit_interval(double p, double tol) { return p >= -tol && p <= 1.0 + tol; }

}  // namespace

HiddenVariableSpace::HiddenVariableSpace(std::vector<double> points, std::vector<double> weights, double tol)
    : points_(std::move(points)), weights_(std::move(weights)) {
    if (weights_.empty()) {
        throw ValidationError("hidden-variable space needs at least one point");
    }
    if (points_.empty()) {
        points_.resize(weights_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            points_[i] = static_cast<double>(i);
        }
    }
    if (points_.size() != weights_.size()) {
        throw ValidationError("hidden-variable space: points and weights differ in length");
    }
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
            throw ValidationError("hidden-variable weight " + std::to_string(i) + " is negative or not finite");
        }
    }
    double total = pairwise_sum(weights_);
    if (std::fabs(total - 1.0) > tol) {
        std::ostringstream os;
        os.precision(17);
        os << "hidden-variable weights sum to " << total << ", expected 1";
        throw ValidationError(os.str());
    }
}

HiddenVariableSpace HiddenVariableSpace::uniform_grid(std::size_t n) {
    if (n == 0) {
        throw DomainError("lambda grid needs at least one point");
    }
    std::vector<double> points(n);
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        points[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    }
    // 1/n summed n times is not always exactly 1.
    return HiddenVariableSpace(std::move(points), std::move(weights), 1e-12);
}

ResponseFunction ResponseFunction::direct(TripleFn fn) {
    ResponseFunction r;
    r.triple_ = std::move(fn);
    return r;
}

ResponseFunction ResponseFunction::split(IdealFn ideal, EfficiencyFn efficiency) {
    ResponseFunction r;
    r.ideal_ = std::move(ideal);
    r.efficiency_ = std::move(efficiency);
    r.triple_ = [ideal = r.ideal_, eff = r.efficiency_](Angle angle, std::size_t lambda) {
        TwoOutcome id = ideal(angle, lambda);
        ProbTriple t;
        t.plus = id.plus * eff(angle, lambda, Outcome::Plus);
        t.minus = id.minus * eff(angle, lambda, Outcome::Minus);
        t.zero = 1.0 - (t.plus + t.minus);
        return t;
    };
    return r;
}

ResponseFunction ResponseFunction::split(IdealFn ideal, ChannelBlindEfficiencyFn efficiency) {
    return split(std::move(ideal),
                 EfficiencyFn([eff = std::move(efficiency)](Angle angle, std::size_t lambda, Outcome) {
                     return eff(angle, lambda);
                 }));
}

ResponseFunction ResponseFunction::tabulated(std::vector<std::pair<Angle, std::vector<ProbTriple>>> table) {
    ResponseFunction r;
    for (const auto &[angle, _] : table) {
        for (const Angle &seen : r.tabulated_angles_) {
            if (seen.near(angle)) {
                throw ValidationError("tabulated response lists angle " + std::to_string(angle.deg()) +
                                      " deg twice");
            }
        }
        r.tabulated_angles_.push_back(angle);
    }
    r.triple_ = [table = std::move(table)](Angle angle, std::size_t lambda) {
        for (const auto &[key, row] : table) {
            if (key.near(angle)) {
                if (lambda >= row.size()) {
                    throw IndexError("tabulated response has no entry for lambda " + std::to_string(lambda));
                }
                return row[lambda];
            }
        }
        throw DomainError("angle " + std::to_string(angle.deg()) + " deg is not tabulated");
    };
    return r;
}

TwoOutcome ResponseFunction::ideal(Angle angle, std::size_t lambda) const {
    if (!ideal_) {
        throw PreconditionError("response has no split form");
    }
    return ideal_(angle, lambda);
}

double ResponseFunction::efficiency(Angle angle, std::size_t lambda, Outcome r) const {
    if (!efficiency_) {
        throw PreconditionError("response has no split form");
    }
    return efficiency_(angle, lambda, r);
}

ProbTriple ResponseFunction::raw(Angle angle, std::size_t lambda) const { return triple_(angle, lambda); }

SLHVModel::SLHVModel(HiddenVariableSpace space, ResponseFunction response1, ResponseFunction response2,
                     Tolerances tolerances)
    : space_(std::move(space)),
      response1_(std::move(response1)),
      response2_(std::move(response2)),
      tolerances_(tolerances) {}

ProbTriple response(const SLHVModel &model, Party party, Angle angle, std::size_t lambda) {
    if (lambda >= model.space().size()) {
        throw IndexError("lambda index " + std::to_string(lambda) + " out of range (space has " +
                         std::to_string(model.space().size()) + " points)");
    }
    const ResponseFunction &fn = model.responder(party);
    const double tol = model.tolerances().normalization;
    if (fn.has_split_form()) {
        TwoOutcome id = fn.ideal(angle, lambda);
        if (!in_unit_interval(id.plus, tol) || !in_unit_interval(id.minus, tol) ||
            std::fabs(id.plus + id.minus - 1.0) > tol) {
            throw ValidationError("ideal response not normalized at " + where(party, angle, lambda));
        }
        for (Outcome r : {Outcome::Plus, Outcome::Minus}) {
            if (!in_unit_interval(fn.efficiency(angle, lambda, r), tol)) {
                throw ValidationError("efficiency outside [0,1] at " + where(party, angle, lambda));
            }
        }
    }
    ProbTriple t = fn.raw(angle, lambda);
    if (!in_unit_interval(t.plus, tol) || !in_unit_interval(t.minus, tol) || !in_unit_interval(t.zero, tol) ||
        std::fabs(t.sum() - 1.0) > tol) {
        std::ostringstream os;
        os.precision(17);
        os << "response (" << t.plus << ", " << t.minus << ", " << t.zero << ") not normalized at "
           << where(party, angle, lambda);
        throw ValidationError(os.str());
    }
    return t;
}

SLHVModel restrict_to(const SLHVModel &model, std::span<const Angle> angles1, std::span<const Angle> angles2) {
    auto table_for = [&](Party party, std::span<const Angle> angles) {
        std::vector<std::pair<Angle, std::vector<ProbTriple>>> table;
        for (Angle angle : angles) {
            bool seen = false;
            for (const auto &entry : table) {
                seen = seen || entry.first.near(angle);
            }
            if (seen) {
                continue;
            }
            std::vector<ProbTriple> row(model.space().size());
            for (std::size_t l = 0; l < row.size(); ++l) {
                row[l] = response(model, party, angle, l);
            }
            table.emplace_back(angle, std::move(row));
        }
        return ResponseFunction::tabulated(std::move(table));
    };
    return SLHVModel(model.space(), table_for(Party::One, angles1), table_for(Party::Two, angles2),
                     model.tolerances());
}

SLHVModel restrict_to(const SLHVModel &model, const SettingsQuad &quad) {
    const std::array<Angle, 2> a = {quad.a, quad.a_prime};
    const std::array<Angle, 2> b = {quad.b, quad.b_prime};
    return restrict_to(model, a, b);
}

double nondetect_prob(const SLHVModel &model, Party party, Angle angle, std::size_t lambda) {
    return response(model, party, angle, lambda).zero;
}

double alpha(const SLHVModel &model, Party party, Angle angle, std::size_t lambda) {
    ProbTriple t = response(model, party, angle, lambda);
    return t.plus + t.minus;
}

double joint_prob(const SLHVModel &model, Angle a, Angle b, std::size_t lambda, Outcome r, Outcome q) {
    return response(model, Party::One, a, lambda)[r] * response(model, Party::Two, b, lambda)[q];
}

double local_average(const SLHVModel &model, Party party, Angle angle, std::size_t lambda) {
    ProbTriple t = response(model, party, angle, lambda);
    return t.plus - t.minus;
}

double effective_local_average(const SLHVModel &model, Party party, Angle angle, std::size_t lambda) {
    ProbTriple t = response(model, party, angle, lambda);
    double detected = t.plus + t.minus;
    if (!(detected > 0.0)) {
        throw DegenerateModelError("no detection (p0 = 1) at " + where(party, angle, lambda));
    }
    return (t.plus - t.minus) / detected;
}

namespace {

void require_angles(std::span<const Angle> angles1, std::span<const Angle> angles2) {
    if (angles1.empty() || angles2.empty()) {
        throw PreconditionError("assumption validators need at least one angle per party");
    }
}

}  // namespace

Solution1Report validate_solution1(const SLHVModel &model, std::span<const Angle> angles1,
                                   std::span<const Angle> angles2) {
    require_angles(angles1, angles2);
    Solution1Report rep;
    rep.tolerance = model.tolerances().assumption;
    for (Party party : {Party::One, Party::Two}) {
        std::span<const Angle> angles = party == Party::One ? angles1 : angles2;
        for (std::size_t l = 0; l < model.space().size(); ++l) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            Angle at_lo;
            Angle at_hi;
            for (Angle angle : angles) {
                double p0 = nondetect_prob(model, party, angle, l);
                if (p0 < lo) {
                    lo = p0;
                    at_lo = angle;
                }
                if (p0 > hi) {
                    hi = p0;
                    at_hi = angle;
                }
            }
            if (hi - lo > rep.deviation || !rep.worst_party) {
                if (hi - lo > rep.deviation) {
                    rep.deviation = hi - lo;
                }
                rep.worst_party = party;
                rep.worst_lambda = l;
                rep.worst_angle_low = at_lo;
                rep.worst_angle_high = at_hi;
            }
        }
    }
    rep.passed = rep.deviation <= rep.tolerance;
    return rep;
}

Solution1Report validate_solution1(const SLHVModel &model, const SettingsQuad &quad) {
    const std::array<Angle, 2> a = {quad.a, quad.a_prime};
    const std::array<Angle, 2> b = {quad.b, quad.b_prime};
    return validate_solution1(model, a, b);
}

Solution2Report validate_solution2(const SLHVModel &model, std::span<const Angle> angles1,
                                   std::span<const Angle> angles2) {
    require_angles(angles1, angles2);
    Solution2Report rep;
    rep.tolerance = model.tolerances().assumption;
    const HiddenVariableSpace &space = model.space();
    std::vector<double> weighted(space.size());
    for (Party party : {Party::One, Party::Two}) {
        std::span<const Angle> angles = party == Party::One ? angles1 : angles2;
        for (Angle angle : angles) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t l = 0; l < space.size(); ++l) {
                double p0 = nondetect_prob(model, party, angle, l);
                lo = std::min(lo, p0);
                hi = std::max(hi, p0);
                weighted[l] = space.weight(l) * p0;
            }
            rep.implied_p0.push_back({party, angle, pairwise_sum(weighted)});
            if (hi - lo > rep.deviation || !rep.worst_party) {
                rep.deviation = std::max(rep.deviation, hi - lo);
                rep.worst_party = party;
                rep.worst_angle = angle;
            }
        }
    }
    rep.passed = rep.deviation <= rep.tolerance;
    return rep;
}

Solution2Report validate_solution2(const SLHVModel &model, const SettingsQuad &quad) {
    const std::array<Angle, 2> a = {quad.a, quad.a_prime};
    const std::array<Angle, 2> b = {quad.b, quad.b_prime};
    return validate_solution2(model, a, b);
}

double Solution2Report::p0_at(Party party, Angle angle) const {
    for (const auto &entry : implied_p0) {
        if (entry.party == party && entry.angle.near(angle)) {
            return entry.p0;
        }
    }
    throw DomainError("no implied P0 recorded for party " + std::to_string(party_number(party)) + " at " +
                      std::to_string(angle.deg()) + " deg");
}

}  // namespace effchsh
