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

#include "effchsh/adversary.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "effchsh/rng.h"

namespace effchsh {

void SearchConfig::validate() const {
    if (restarts < 1) {
        throw DomainError("search needs at least one restart");
    }
    if (max_evals < 10) {
        throw DomainError("search needs max_evals >= 10");
    }
    if (grid == 0) {
        throw DomainError("search needs a non-empty lambda grid");
    }
}

ObjectiveValue objective(const AdversaryFamily &family, std::span<const double> params, const SettingsQuad &quad,
                         EffectiveCorrelationMode mode, std::size_t grid) {
    Instantiation inst = family.instantiate(params, grid);
    const SLHVModel model = restrict_to(inst.model, quad);
    ObjectiveValue v;
    v.projected = inst.projected;
    v.solution1_passed = validate_solution1(model, quad).passed;
    try {
        double u = 0.0;
        for (PairIndex p : kAllPairs) {
            u += kChshSigns[static_cast<std::size_t>(p)] *
                 exact_effective_correlation(model, quad.first(p), quad.second(p), mode, Enforcement::Permissive);
        }
        v.u_eff = u;
        v.value = std::fabs(u);
    } catch (const DegenerateModelError &) {
        v.degenerate = true;
    }
    return v;
}

namespace {

constexpr double kSoundnessTolerance = 1e-9;

struct BudgetExhausted {};

/// Objective over the free coordinates, rescaled to the unit cube.
class RestartEvaluator {
   public:
    RestartEvaluator(const SearchConfig &config, RestartSummary &summary)
        : config_(config), summary_(summary), base_(config.family.lower()) {
        for (std::size_t i = 0; i < config.family.dimension(); ++i) {
            if (!config.family.is_frozen(i)) {
                free_.push_back(i);
            }
        }
    }

    std::size_t dimension() const { return free_.size(); }

    std::vector<double> to_params(const std::vector<double> &z) const {
        std::vector<double> p = base_;
        const auto &lo = config_.family.lower();
        const auto &hi = config_.family.upper();
        for (std::size_t k = 0; k < free_.size(); ++k) {
            std::size_t i = free_[k];
            p[i] = std::clamp(lo[i] + z[k] * (hi[i] - lo[i]), lo[i], hi[i]);
        }
        return p;
    }

    /// Returns -|U_eff| so that the simplex minimizes.
    double operator()(const std::vector<double> &z) {
        if (summary_.evaluations >= config_.max_evals) {
            throw BudgetExhausted{};
        }
        ++summary_.evaluations;
        std::vector<double> p = to_params(z);
        ObjectiveValue v = objective(config_.family, p, config_.quad, config_.mode, config_.grid);
        if (v.solution1_passed) {
            ++summary_.solution1_evaluations;
            if (v.value > 2.0 + kSoundnessTolerance) {
                ++summary_.soundness_violations;
            }
        }
        if (summary_.best_parameters.empty() || v.value > summary_.best_value) {
            summary_.best_value = v.value;
            summary_.best_parameters = p;
        }
        return -v.value;
    }

   private:
    const SearchConfig &config_;
    RestartSummary &summary_;
    std::vector<double> base_;
    std::vector<std::size_t> free_;
};

std::vector<double> clamp_unit(std::vector<double> z) {
    for (double &v : z) {
        v = std::clamp(v, 0.0, 1.0);
    }
    return z;
}

std::vector<double> affine(const std::vector<double> &c, const std::vector<double> &x, double t) {
    // c + t (x - c)
    std::vector<double> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i] = c[i] + t * (x[i] - c[i]);
    }
    return clamp_unit(std::move(out));
}

RestartSummary run_restart(const SearchConfig &config, int restart) {
    RestartSummary summary;
    summary.restart = restart;
    RestartEvaluator f(config, summary);
    CounterRng rng = CounterRng::substream(config.seed, static_cast<std::uint64_t>(restart), 0);
    const std::size_t d = f.dimension();

    std::vector<double> z0(d);
    for (double &v : z0) {
        v = rng.uniform();
    }
    summary.start = f.to_params(z0);

    if (d == 0) {
        f(z0);
        summary.best_trace.push_back(summary.best_value);
        return summary;
    }

    constexpr double kStep = 0.15;
    std::vector<std::vector<double>> simplex{z0};
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<double> z = z0;
        z[i] += z[i] + kStep <= 1.0 ? kStep : -kStep;
        simplex.push_back(z);
    }

    try {
        std::vector<double> fv;
        for (const auto &z : simplex) {
            fv.push_back(f(z));
        }
        std::vector<std::size_t> order(d + 1);
        while (true) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return fv[i] < fv[j]; });
            summary.best_trace.push_back(summary.best_value);
            const std::size_t best = order.front();
            const std::size_t worst = order.back();
            const std::size_t second_worst = order[d - 1];

            double diameter = 0.0;
            for (const auto &z : simplex) {
                for (std::size_t i = 0; i < d; ++i) {
                    diameter = std::max(diameter, std::fabs(z[i] - simplex[best][i]));
                }
            }
            if (fv[worst] - fv[best] <= 1e-12 && diameter <= 1e-7) {
                break;
            }

            std::vector<double> centroid(d, 0.0);
            for (std::size_t k = 0; k < d; ++k) {
                for (std::size_t i = 0; i < d; ++i) {
                    centroid[i] += simplex[order[k]][i] / static_cast<double>(d);
                }
            }

            std::vector<double> xr = affine(centroid, simplex[worst], -1.0);
            double fr = f(xr);
            if (fr < fv[best]) {
                std::vector<double> xe = affine(centroid, simplex[worst], -2.0);
                double fe = f(xe);
                if (fe < fr) {
                    simplex[worst] = std::move(xe);
                    fv[worst] = fe;
                } else {
                    simplex[worst] = std::move(xr);
                    fv[worst] = fr;
                }
                continue;
            }
            if (fr < fv[second_worst]) {
                simplex[worst] = std::move(xr);
                fv[worst] = fr;
                continue;
            }
            bool outside = fr < fv[worst];
            std::vector<double> xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, simplex[worst], 0.5);
            double fc = f(xc);
            if (fc < std::min(fr, fv[worst])) {
                simplex[worst] = std::move(xc);
                fv[worst] = fc;
                continue;
            }
            for (std::size_t k = 1; k <= d; ++k) {
                std::size_t i = order[k];
                simplex[i] = affine(simplex[best], simplex[i], 0.5);
                fv[i] = f(simplex[i]);
            }
        }
    } catch (const BudgetExhausted &) {
        summary.exhausted = true;
        summary.best_trace.push_back(summary.best_value);
    }
    return summary;
}

}  // namespace

AdversaryResult search(const SearchConfig &config) {
    config.validate();
    std::vector<RestartSummary> runs(static_cast<std::size_t>(config.restarts));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int r = next++; r < config.restarts; r = next++) {
            runs[static_cast<std::size_t>(r)] = run_restart(config, r);
        }
    };
    unsigned workers = config.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.workers;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(config.restarts));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
    }

    AdversaryResult res;
    res.family = config.family.name();
    res.parameter_names = config.family.parameter_names();
    res.lower = config.family.lower();
    res.upper = config.family.upper();
    res.quad = config.quad;
    res.mode = config.mode;
    res.grid = config.grid;
    res.seed = config.seed;
    for (const RestartSummary &run : runs) {
        res.evaluation_count += run.evaluations;
        res.exhausted = res.exhausted || run.exhausted;
        res.solution1_evaluations += run.solution1_evaluations;
        res.soundness_violations += run.soundness_violations;
        if (res.best_parameters.empty() || run.best_value > res.best_abs_u_eff) {
            res.best_abs_u_eff = run.best_value;
            res.best_parameters = run.best_parameters;
            res.best_restart = run.restart;
        }
    }
    res.restarts = std::move(runs);

    ObjectiveValue at_best = objective(config.family, res.best_parameters, config.quad, config.mode, config.grid);
    res.best_u_eff = at_best.u_eff;
    res.projected = at_best.projected;
    Instantiation inst = config.family.instantiate(res.best_parameters, config.grid);
    res.solution1 = validate_solution1(inst.model, config.quad);
    res.solution2 = validate_solution2(inst.model, config.quad);
    return res;
}

nlohmann::json to_json(const AdversaryResult &r) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["family"] = r.family;
    nlohmann::json box = nlohmann::json::object();
    for (std::size_t i = 0; i < r.parameter_names.size(); ++i) {
        box[r.parameter_names[i]] = {r.lower[i], r.upper[i]};
    }
    j["box"] = box;
    auto q = r.quad.to_degrees();
    j["quad_deg"] = {q[0], q[1], q[2], q[3]};
    j["mode"] = mode_name(r.mode);
    j["lambda_grid"] = r.grid;
    j["seed"] = r.seed;
    nlohmann::json best = nlohmann::json::object();
    for (std::size_t i = 0; i < r.parameter_names.size() && i < r.best_parameters.size(); ++i) {
        best[r.parameter_names[i]] = r.best_parameters[i];
    }
    j["best_parameters"] = best;
    j["best_abs_U_eff"] = r.best_abs_u_eff;
    j["best_U_eff"] = r.best_u_eff;
    j["best_restart"] = r.best_restart;
    j["projected"] = r.projected;
    j["evaluation_count"] = r.evaluation_count;
    j["budget_exhausted"] = r.exhausted;
    j["assumptions_at_best"] = {{"solution1", to_json(r.solution1)}, {"solution2", to_json(r.solution2)}};
    j["soundness"] = {{"solution1_evaluations", r.solution1_evaluations},
                      {"violations_above_2", r.soundness_violations}};
    nlohmann::json runs = nlohmann::json::array();
    for (const auto &run : r.restarts) {
        runs.push_back({{"restart", run.restart},
                        {"start", run.start},
                        {"best_parameters", run.best_parameters},
                        {"best_abs_U_eff", run.best_value},
                        {"evaluations", run.evaluations},
                        {"exhausted", run.exhausted},
                        {"iterations", run.best_trace.size()}});
    }
    j["restarts"] = runs;
    // Replay: a parametric model file reproducing the optimum.
    j["model"] = {{"schema_version", 1},
                  {"kind", "parametric"},
                  {"family", r.family},
                  {"parameters", best},
                  {"lambda_grid", r.grid}};
    return j;
}

}  // namespace effchsh
