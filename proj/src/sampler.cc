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

#include "effchsh/sampler.h"

#include <algorithm>
#include <atomic>
#include <thread>

namespace effchsh {

namespace {

Outcome draw(const ProbTriple &t, double u) {
    if (u < t.plus) {
        return Outcome::Plus;
    }
    if (u < t.plus + t.minus) {
        return Outcome::Minus;
    }
    return Outcome::NoDetect;
}

Outcome coin(CounterRng &rng) { return rng.uniform() < 0.5 ? Outcome::Plus : Outcome::Minus; }

Outcome flip(Outcome o) { return o == Outcome::Plus ? Outcome::Minus : Outcome::Plus; }

}  // namespace

ExperimentPlan::ExperimentPlan(SettingsQuad quad, std::uint64_t trials_per_pair, std::uint64_t seed)
    : quad_(quad), trials_(trials_per_pair), seed_(seed) {
    if (trials_per_pair == 0) {
        throw DomainError("experiment plan needs at least one trial per setting pair");
    }
}

SlhvPairSampler::SlhvPairSampler(const SLHVModel &model, Angle a, Angle b) {
    const HiddenVariableSpace &space = model.space();
    double acc = 0.0;
    for (std::size_t l = 0; l < space.size(); ++l) {
        acc += space.weight(l);
        cumulative_.push_back(acc);
        party1_.push_back(response(model, Party::One, a, l));
        party2_.push_back(response(model, Party::Two, b, l));
    }
}

TrialOutcome SlhvPairSampler::operator()(CounterRng &rng) const {
    double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto l = static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                               static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
    TrialOutcome t;
    t.r = draw(party1_[l], rng.uniform());
    t.q = draw(party2_[l], rng.uniform());
    return t;
}

QmPairSampler::QmPairSampler(const QMModelParams &params, Angle a, Angle b)
    : QmPairSampler(params.eta1() * params.f1(), params.eta2() * params.f2(), params.F(), a, b) {}

QmPairSampler::QmPairSampler(double detect1, double detect2, double F, Angle a, Angle b)
    : detect1_(detect1), detect2_(detect2), same_sign_(0.5 * (1.0 + F * cos2diff(a, b))) {
    for (double x : {detect1, detect2, F}) {
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("QM sampler: detection rates and F must lie in [0, 1]");
        }
    }
}

TrialOutcome QmPairSampler::operator()(CounterRng &rng) const {
    bool d1 = rng.uniform() < detect1_;
    bool d2 = rng.uniform() < detect2_;
    TrialOutcome t;
    if (d1 && d2) {
        t.r = coin(rng);
        t.q = rng.uniform() < same_sign_ ? t.r : flip(t.r);
    } else if (d1) {
        t.r = coin(rng);
    } else if (d2) {
        t.q = coin(rng);
    }
    return t;
}

TrialOutcome sample_slhv_trial(const SLHVModel &model, Angle a, Angle b, CounterRng &rng) {
    return SlhvPairSampler(model, a, b)(rng);
}

TrialOutcome sample_qm_trial(const QMModelParams &params, Angle a, Angle b, CounterRng &rng) {
    return QmPairSampler(params, a, b)(rng);
}

namespace {

template <class Sampler>
CountsTable run_block(const Sampler &sampler, CounterRng rng, std::uint64_t trials) {
    CountsTable table{};
    for (std::uint64_t i = 0; i < trials; ++i) {
        TrialOutcome t = sampler(rng);
        ++table[static_cast<std::size_t>(t.r)][static_cast<std::size_t>(t.q)];
    }
    return table;
}

}  // namespace

ExperimentResult run_experiment(const Source &source, const ExperimentPlan &plan, unsigned workers) {
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    const SettingsQuad &quad = plan.quad();
    const std::uint64_t n = plan.trials_per_pair();
    const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;

    // Samplers are built up front so that validation errors surface on the
    // calling thread.
    std::vector<std::function<CountsTable(CounterRng, std::uint64_t)>> samplers;
    for (PairIndex p : kAllPairs) {
        Angle a = quad.first(p);
        Angle b = quad.second(p);
        if (const auto *model = std::get_if<std::reference_wrapper<const SLHVModel>>(&source)) {
            samplers.emplace_back([s = SlhvPairSampler(model->get(), a, b)](CounterRng rng, std::uint64_t trials) {
                return run_block(s, rng, trials);
            });
        } else {
            samplers.emplace_back([s = QmPairSampler(std::get<QMModelParams>(source), a, b)](
                                      CounterRng rng, std::uint64_t trials) { return run_block(s, rng, trials); });
        }
    }

    const std::uint64_t tasks = 4 * blocks;
    std::vector<CountsTable> partial(tasks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t t = next++; t < tasks; t = next++) {
            std::uint64_t pair = t / blocks;
            std::uint64_t block = t % blocks;
            std::uint64_t trials = std::min(kBlockSize, n - block * kBlockSize);
            partial[t] = samplers[pair](CounterRng::substream(plan.seed(), pair, block), trials);
        }
    };
    unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(workers, tasks));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(work);
        }
    }

    ExperimentResult result;
    result.seed = plan.seed();
    result.trials_per_pair = n;
    result.blocks_per_pair = blocks;
    for (PairIndex p : kAllPairs) {
        auto pi = static_cast<std::size_t>(p);
        CountsRecord &rec = result.records[pi];
        rec.pair = p;
        rec.settings = std::make_pair(quad.first(p), quad.second(p));
        for (std::uint64_t block = 0; block < blocks; ++block) {
            const CountsTable &part = partial[pi * blocks + block];
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t q = 0; q < 3; ++q) {
                    rec.n[r][q] += part[r][q];
                }
            }
        }
        rec.emitted_total = n;
        rec.validate();
    }
    return result;
}

nlohmann::json sidecar_json(const ExperimentResult &result, const ExperimentPlan &plan,
                            const nlohmann::json &source_description) {
    nlohmann::json j;
    j["schema_version"] = 1;
    auto q = plan.quad().to_degrees();
    j["plan"] = {{"quad_deg", {q[0], q[1], q[2], q[3]}},
                 {"trials_per_pair", plan.trials_per_pair()},
                 {"seed", plan.seed()}};
    j["rng"] = {{"algorithm", "splitmix64 counter stream"},
                {"block_size", kBlockSize},
                {"blocks_per_pair", result.blocks_per_pair},
                {"substream", "key = mix64(mix64(mix64(seed) ^ (pair+1)*0x9e3779b97f4a7c15) ^ "
                              "(block+1)*0xd1b54a32d192ed03)"}};
    j["source"] = source_description;
    nlohmann::json pairs = nlohmann::json::array();
    for (const CountsRecord &rec : result.records) {
        nlohmann::json p = {{"pair_label", pair_label(rec.pair)}, {"pair_index", static_cast<int>(rec.pair)}};
        if (rec.settings) {
            p["a_deg"] = rec.settings->first.deg();
            p["b_deg"] = rec.settings->second.deg();
        }
        if (rec.emitted_total) {
            p["emitted_total"] = *rec.emitted_total;
        }
        pairs.push_back(p);
    }
    j["pairs"] = pairs;
    return j;
}

void apply_sidecar(std::array<CountsRecord, 4> &records, const nlohmann::json &sidecar) {
    if (!sidecar.is_object() || !sidecar.contains("pairs") || !sidecar.at("pairs").is_array()) {
        throw InputError("sidecar: expected an object with a 'pairs' array");
    }
    for (const auto &p : sidecar.at("pairs")) {
        if (!p.contains("pair_label") || !p.at("pair_label").is_string()) {
            throw InputError("sidecar: pair entry without 'pair_label'");
        }
        auto label = p.at("pair_label").get<std::string>();
        CountsRecord *rec = nullptr;
        for (auto &r : records) {
            if (label == pair_label(r.pair)) {
                rec = &r;
            }
        }
        if (rec == nullptr) {
            throw InputError("sidecar: unknown pair label '" + label + "'");
        }
        if (p.contains("a_deg") && p.contains("b_deg")) {
            rec->settings =
                std::make_pair(Angle::degrees(p.at("a_deg").get<double>()), Angle::degrees(p.at("b_deg").get<double>()));
        }
        if (p.contains("emitted_total")) {
            auto total = p.at("emitted_total").get<std::uint64_t>();
            if (rec->emitted_total) {
                if (*rec->emitted_total != total) {
                    throw InputError("sidecar: emitted total for " + label + " disagrees with the counts table");
                }
                continue;
            }
            // Coincidence-only tables: the unobserved remainder goes to the
            // (0, 0) cell, which no estimator reads.
            if (total < rec->table_sum()) {
                throw InputError("sidecar: emitted total for " + label + " is below the observed counts");
            }
            rec->count(Outcome::NoDetect, Outcome::NoDetect) += total - rec->table_sum();
            rec->emitted_total = total;
        }
    }
}

}  // namespace effchsh
