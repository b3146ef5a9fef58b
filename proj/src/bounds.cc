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

#include "effchsh/bounds.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "effchsh/numeric.h"

namespace effchsh {

std::string mode_name(EffectiveCorrelationMode mode) {
    switch (mode) {
        case EffectiveCorrelationMode::SolutionI:
            return "solution1";
        case EffectiveCorrelationMode::SolutionII:
            return "solution2";
        case EffectiveCorrelationMode::SolutionIII:
            return "solution3";
    }
    return "unknown";
}

EffectiveCorrelationMode parse_mode(const std::string &text) {
    std::string t;
    for (char c : text) {
        t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    if (t == "solution1" || t == "i" || t == "1") {
        return EffectiveCorrelationMode::SolutionI;
    }
    if (t == "solution2" || t == "ii" || t == "2") {
        return EffectiveCorrelationMode::SolutionII;
    }
    if (t == "solution3" || t == "iii" || t == "3") {
        return EffectiveCorrelationMode::SolutionIII;
    }
    throw InputError("unknown mode '" + text + "' (expected solution1, solution2 or solution3)");
}

double u_of(double x, double x_prime, double y, double y_prime) { return x * (y - y_prime) + x_prime * (y + y_prime); }

std::vector<VertexRow> enumerate_vertices(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0) || !(beta >= 0.0 && beta <= 1.0)) {
        throw DomainError("enumerate_vertices: alpha and beta must lie in [0, 1]");
    }
    // Row order: grouped by how many coordinates sit at their upper corner,
    // and within a group by the positions of the plus signs, lexicographically.
    std::vector<std::vector<int>> plus_positions;
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<int> pos;
        for (int t = 0; t < 4; ++t) {
            if (mask & (1u << t)) {
                pos.push_back(t);
            }
        }
        plus_positions.push_back(std::move(pos));
    }
    std::sort(plus_positions.begin(), plus_positions.end(), [](const auto &l, const auto &r) {
        return l.size() != r.size() ? l.size() < r.size() : l < r;
    });

    std::vector<VertexRow> rows;
    rows.reserve(16);
    for (const auto &pos : plus_positions) {
        VertexRow row;
        row.row_index = static_cast<int>(rows.size()) + 1;
        row.signs = {-1, -1, -1, -1};
        for (int t : pos) {
            row.signs[t] = +1;
        }
        row.u_value = u_of(row.signs[0] * alpha, row.signs[1] * alpha, row.signs[2] * beta, row.signs[3] * beta);
        rows.push_back(row);
    }
    return rows;
}

namespace {

double signed_sum(const std::array<double, 4> &terms) {
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        total += kChshSigns[i] * terms[i];
    }
    return total;
}

}  // namespace

PointwiseBoundReport pointwise_bound_check(const SLHVModel &model, const SettingsQuad &quad) {
    Solution1Report s1 = validate_solution1(model, quad);
    if (!s1.passed) {
        throw PreconditionError("pointwise bound needs angle-independent non-detection; validate_solution1 failed "
                                "with deviation " + std::to_string(s1.deviation));
    }
    PointwiseBoundReport rep;
    rep.max_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < model.space().size(); ++l) {
        double x = local_average(model, Party::One, quad.a, l);
        double xp = local_average(model, Party::One, quad.a_prime, l);
        double y = local_average(model, Party::Two, quad.b, l);
        double yp = local_average(model, Party::Two, quad.b_prime, l);
        double bound = 2.0 * alpha(model, Party::One, quad.a, l) * alpha(model, Party::Two, quad.b, l);
        double excess = std::fabs(u_of(x, xp, y, yp)) - bound;
        if (excess > rep.max_excess) {
            rep.max_excess = excess;
            rep.worst_lambda = l;
        }
    }
    rep.passed = rep.max_excess <= rep.tolerance;
    return rep;
}

double exact_correlation(const SLHVModel &model, Angle a, Angle b) {
    const HiddenVariableSpace &space = model.space();
    std::vector<double> terms(space.size());
    for (std::size_t l = 0; l < space.size(); ++l) {
        terms[l] = space.weight(l) * local_average(model, Party::One, a, l) * local_average(model, Party::Two, b, l);
    }
    return pairwise_sum(terms);
}

double exact_coincidence_sum(const SLHVModel &model, Angle a, Angle b) {
    const HiddenVariableSpace &space = model.space();
    std::vector<double> terms(space.size());
    for (std::size_t l = 0; l < space.size(); ++l) {
        terms[l] = space.weight(l) * alpha(model, Party::One, a, l) * alpha(model, Party::Two, b, l);
    }
    return pairwise_sum(terms);
}

UResult compute_U(const SLHVModel &model, const SettingsQuad &quad) {
    UResult res;
    for (PairIndex p : kAllPairs) {
        auto i = static_cast<std::size_t>(p);
        res.correlation[i] = exact_correlation(model, quad.first(p), quad.second(p));
        res.coincidence_sum[i] = exact_coincidence_sum(model, quad.first(p), quad.second(p));
    }
    res.U = signed_sum(res.correlation);
    res.M = 2.0 * res.coincidence_sum[0];
    res.solution1 = validate_solution1(model, quad);
    constexpr double tol = 1e-12;
    res.u_within_m = std::fabs(res.U) <= res.M + tol;
    res.u_within_2 = std::fabs(res.U) <= 2.0 + tol;
    return res;
}

double exact_effective_correlation(const SLHVModel &model, Angle a, Angle b, EffectiveCorrelationMode mode,
                                   Enforcement enforcement) {
    switch (mode) {
        case EffectiveCorrelationMode::SolutionI: {
            double coincidences = exact_coincidence_sum(model, a, b);
            if (!(coincidences > 0.0)) {
                throw DegenerateModelError("zero coincidence probability at (" + std::to_string(a.deg()) + ", " +
                                           std::to_string(b.deg()) + ") deg");
            }
            return exact_correlation(model, a, b) / coincidences;
        }
        case EffectiveCorrelationMode::SolutionII: {
            const std::array<Angle, 1> as = {a};
            const std::array<Angle, 1> bs = {b};
            Solution2Report s2 = validate_solution2(model, as, bs);
            if (enforcement == Enforcement::Strict && !s2.passed) {
                throw PreconditionError("validate_solution2 failed: non-detection varies with lambda by " +
                                        std::to_string(s2.deviation));
            }
            double detect = (1.0 - s2.p0_at(Party::One, a)) * (1.0 - s2.p0_at(Party::Two, b));
            if (!(detect > 0.0)) {
                throw DegenerateModelError("implied P0 = 1 for one party at (" + std::to_string(a.deg()) + ", " +
                                           std::to_string(b.deg()) + ") deg");
            }
            return exact_correlation(model, a, b) / detect;
        }
        case EffectiveCorrelationMode::SolutionIII: {
            const HiddenVariableSpace &space = model.space();
            std::vector<double> terms(space.size(), 0.0);
            for (std::size_t l = 0; l < space.size(); ++l) {
                if (space.weight(l) == 0.0) {
                    continue;
                }
                terms[l] = space.weight(l) * effective_local_average(model, Party::One, a, l) *
                           effective_local_average(model, Party::Two, b, l);
            }
            return pairwise_sum(terms);
        }
    }
    throw DomainError("unknown effective correlation mode");
}

bool InequalityReport::theorem_breach() const {
    if (!u_within_2) {
        return true;
    }
    if (solution1.passed && ((u_within_m && !*u_within_m) || (pointwise && !pointwise->passed))) {
        return true;
    }
    return assumption_passed && !u_eff_within_2;
}

std::string InequalityReport::verdict() const {
    if (theorem_breach()) {
        return "theorem breach";
    }
    if (assumption_passed) {
        return "bound holds";
    }
    return "assumptions violated; bound not guaranteed";
}

InequalityReport compute_U_eff(const SLHVModel &full_model, const SettingsQuad &quad, EffectiveCorrelationMode mode) {
    const SLHVModel model = restrict_to(full_model, quad);
    InequalityReport rep;
    rep.mode = mode;
    rep.quad = quad;
    std::array<double, 4> e{};
    std::array<double, 4> e_eff{};
    for (PairIndex p : kAllPairs) {
        auto i = static_cast<std::size_t>(p);
        PairValues &v = rep.pairs[i];
        v.pair = p;
        v.a = quad.first(p);
        v.b = quad.second(p);
        v.correlation = exact_correlation(model, v.a, v.b);
        v.coincidence_sum = exact_coincidence_sum(model, v.a, v.b);
        v.effective_correlation = exact_effective_correlation(model, v.a, v.b, mode, Enforcement::Permissive);
        e[i] = v.correlation;
        e_eff[i] = v.effective_correlation;
    }
    rep.U = signed_sum(e);
    rep.M = 2.0 * rep.pairs[0].coincidence_sum;
    rep.U_eff = signed_sum(e_eff);

    rep.solution1 = validate_solution1(model, quad);
    rep.solution2 = validate_solution2(model, quad);
    switch (mode) {
        case EffectiveCorrelationMode::SolutionI:
            rep.assumption_passed = rep.solution1.passed;
            rep.assumption_name = "angle-independent non-detection (validate_solution1)";
            break;
        case EffectiveCorrelationMode::SolutionII:
            rep.assumption_passed = rep.solution2.passed;
            rep.assumption_name = "lambda-independent non-detection (validate_solution2)";
            break;
        case EffectiveCorrelationMode::SolutionIII:
            // Reaching here means every effective local average was defined.
            rep.assumption_passed = true;
            rep.assumption_name = "effective correlations built from per-lambda effective averages";
            break;
    }

    if (rep.solution1.passed) {
        rep.pointwise = pointwise_bound_check(model, quad);
        rep.u_within_m = std::fabs(rep.U) <= rep.M + rep.tolerance;
    }
    rep.u_within_2 = std::fabs(rep.U) <= 2.0 + rep.tolerance;
    rep.u_eff_within_2 = std::fabs(rep.U_eff) <= 2.0 + rep.tolerance;

    for (std::size_t l = 0; l < model.space().size(); ++l) {
        LambdaDetail d;
        d.index = l;
        d.point = model.space().point(l);
        d.u = u_of(local_average(model, Party::One, quad.a, l), local_average(model, Party::One, quad.a_prime, l),
                   local_average(model, Party::Two, quad.b, l), local_average(model, Party::Two, quad.b_prime, l));
        d.bound = 2.0 * alpha(model, Party::One, quad.a, l) * alpha(model, Party::Two, quad.b, l);
        rep.lambda_details.push_back(d);
    }
    return rep;
}

nlohmann::json to_json(const Solution1Report &r) {
    nlohmann::json j;
    j["passed"] = r.passed;
    j["deviation"] = r.deviation;
    j["tolerance"] = r.tolerance;
    if (!r.passed && r.worst_party) {
        j["worst"] = {{"party", party_number(*r.worst_party)},
                      {"lambda", r.worst_lambda},
                      {"angle_low_deg", r.worst_angle_low.deg()},
                      {"angle_high_deg", r.worst_angle_high.deg()}};
    }
    return j;
}

nlohmann::json to_json(const Solution2Report &r) {
    nlohmann::json j;
    j["passed"] = r.passed;
    j["deviation"] = r.deviation;
    j["tolerance"] = r.tolerance;
    if (!r.passed && r.worst_party) {
        j["worst"] = {{"party", party_number(*r.worst_party)}, {"angle_deg", r.worst_angle.deg()}};
    }
    nlohmann::json p0 = nlohmann::json::array();
    for (const auto &e : r.implied_p0) {
        p0.push_back({{"party", party_number(e.party)}, {"angle_deg", e.angle.deg()}, {"P0", e.p0}});
    }
    j[r.passed ? "implied_P0" : "mean_p0"] = p0;
    return j;
}

nlohmann::json to_json(const InequalityReport &r, int verbosity) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["mode"] = mode_name(r.mode);
    auto q = r.quad.to_degrees();
    j["quad_deg"] = {q[0], q[1], q[2], q[3]};
    nlohmann::json pairs = nlohmann::json::object();
    for (const auto &p : r.pairs) {
        pairs[pair_label(p.pair)] = {{"a_deg", p.a.deg()},
                                     {"b_deg", p.b.deg()},
                                     {"E", p.correlation},
                                     {"coincidence_sum", p.coincidence_sum},
                                     {"E_eff", p.effective_correlation}};
    }
    j["per_pair"] = pairs;
    j["U"] = r.U;
    j["M"] = r.M;
    j["U_eff"] = r.U_eff;
    j["assumption"] = {{"name", r.assumption_name}, {"passed", r.assumption_passed}};
    j["validators"] = {{"solution1", to_json(r.solution1)}, {"solution2", to_json(r.solution2)}};
    nlohmann::json verdicts;
    if (r.pointwise) {
        verdicts["pointwise_u_le_2_alpha_beta"] = {{"passed", r.pointwise->passed},
                                                   {"max_excess", r.pointwise->max_excess},
                                                   {"worst_lambda", r.pointwise->worst_lambda}};
    } else {
        verdicts["pointwise_u_le_2_alpha_beta"] = "not applicable (non-detection depends on angle)";
    }
    if (r.u_within_m) {
        verdicts["abs_U_le_M"] = *r.u_within_m;
    } else {
        verdicts["abs_U_le_M"] = "not guaranteed";
    }
    verdicts["abs_U_le_2"] = r.u_within_2;
    verdicts["abs_U_eff_le_2"] = r.u_eff_within_2;
    verdicts["tolerance"] = r.tolerance;
    j["verdicts"] = verdicts;
    j["verdict"] = r.verdict();
    // Products of single-party triples make P00 = P0(1) P0(2) automatic for models.
    j["p00_factorization"] = "structural";
    if (verbosity >= 2) {
        double max_abs_u = 0.0;
        double min_slack = std::numeric_limits<double>::infinity();
        nlohmann::json per = nlohmann::json::array();
        for (const auto &d : r.lambda_details) {
            max_abs_u = std::max(max_abs_u, std::fabs(d.u));
            min_slack = std::min(min_slack, d.bound - std::fabs(d.u));
            per.push_back({{"index", d.index}, {"lambda", d.point}, {"u", d.u}, {"two_alpha_beta", d.bound}});
        }
        j["lambda_extremes"] = {{"max_abs_u", max_abs_u}, {"min_slack", min_slack}};
        j["per_lambda"] = per;
    }
    return j;
}

}  // namespace effchsh
