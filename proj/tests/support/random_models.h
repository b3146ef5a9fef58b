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

// Random discrete SLHV models for property suites.

#ifndef EFFCHSH_TESTS_RANDOM_MODELS_H
#define EFFCHSH_TESTS_RANDOM_MODELS_H

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "effchsh/lhv.h"

namespace effchsh::testing {

enum class Assumption { SolutionI, SolutionII, General };

struct IdealShape {
    double phase = 0.0;
    double amplitude = 1.0;
    bool sign = false;
    bool flip = false;
};

inline double uniform(std::mt19937_64 &g, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline std::vector<IdealShape> random_shapes(std::mt19937_64 &g, std::size_t n) {
    std::vector<IdealShape> s(n);
    for (auto &x : s) {
        x.phase = uniform(g, 0.0, std::numbers::pi);
        x.amplitude = uniform(g);
        x.sign = uniform(g) < 0.4;
        x.flip = uniform(g) < 0.5;
    }
    return s;
}

inline TwoOutcome eval_shape(const IdealShape &s, Angle angle) {
    double c = std::cos(2.0 * (angle.rad() - s.phase));
    if (s.flip) {
        c = -c;
    }
    double plus = s.sign ? (c >= 0.0 ? 1.0 : 0.0) : 0.5 * (1.0 + s.amplitude * c);
    return {plus, 1.0 - plus};
}

inline HiddenVariableSpace random_space(std::mt19937_64 &g, std::size_t n) {
    std::vector<double> points(n);
    std::vector<double> weights(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = uniform(g, 0.0, std::numbers::pi);
        weights[i] = uniform(g, 0.05, 1.0);
        total += weights[i];
    }
    for (double &w : weights) {
        w /= total;
    }
    // Force an exact unit sum by absorbing rounding into the last weight.
    double head = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        head += weights[i];
    }
    weights[n - 1] = 1.0 - head;
    return HiddenVariableSpace(std::move(points), std::move(weights));
}

inline ResponseFunction random_response(std::mt19937_64 &g, std::size_t n, Assumption kind) {
    auto shapes = std::make_shared<std::vector<IdealShape>>(random_shapes(g, n));
    auto ideal = [shapes](Angle a, std::size_t l) { return eval_shape(shapes->at(l), a); };
    switch (kind) {
        case Assumption::SolutionI: {
            auto p0 = std::make_shared<std::vector<double>>(n);
            for (double &x : *p0) {
                x = uniform(g) < 0.1 ? 0.0 : uniform(g, 0.0, 0.9);
            }
            return ResponseFunction::split(ideal, [p0](Angle, std::size_t l) { return 1.0 - p0->at(l); });
        }
        case Assumption::SolutionII: {
            double c0 = uniform(g, 0.05, 0.85);
            double c1 = uniform(g, -1.0, 1.0) * std::min(c0, 0.9 - c0);
            double psi = uniform(g, 0.0, std::numbers::pi);
            return ResponseFunction::split(ideal, [c0, c1, psi](Angle a, std::size_t) {
                return 1.0 - (c0 + c1 * std::cos(2.0 * (a.rad() - psi)));
            });
        }
        case Assumption::General:
            break;
    }
    struct Eff {
        double c0, c1, psi, tilt;
    };
    auto eff = std::make_shared<std::vector<Eff>>(n);
    for (auto &e : *eff) {
        e = {uniform(g, 0.0, 0.9), uniform(g, -0.5, 0.5), uniform(g, 0.0, std::numbers::pi), uniform(g, -0.3, 0.3)};
    }
    return ResponseFunction::split(ideal, [eff](Angle a, std::size_t l, Outcome r) {
        const Eff &e = eff->at(l);
        double p0 = e.c0 + e.c1 * std::cos(2.0 * (a.rad() - e.psi)) + (r == Outcome::Plus ? e.tilt : -e.tilt);
        return 1.0 - std::clamp(p0, 0.0, 0.95);
    });
}

inline SLHVModel random_model(std::mt19937_64 &g, Assumption kind, std::size_t min_lambda = 1,
                              std::size_t max_lambda = 24) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(min_lambda, max_lambda)(g);
    HiddenVariableSpace space = random_space(g, n);
    ResponseFunction r1 = random_response(g, n, kind);
    ResponseFunction r2 = random_response(g, n, kind);
    return SLHVModel(std::move(space), std::move(r1), std::move(r2));
}

inline SettingsQuad random_quad(std::mt19937_64 &g) {
    return SettingsQuad::degrees(uniform(g, 0, 180), uniform(g, 0, 180), uniform(g, 0, 180), uniform(g, 0, 180));
}

/// Constant-triple model: every (angle, lambda) answers with the same triple.
inline SLHVModel constant_model(ProbTriple t1, ProbTriple t2, std::size_t n = 1) {
    return SLHVModel(HiddenVariableSpace::uniform_grid(n), ResponseFunction::direct([t1](Angle, std::size_t) {
                         return t1;
                     }),
                     ResponseFunction::direct([t2](Angle, std::size_t) { return t2; }));
}

/// Deterministic perfect model: party 1 answers +1 when cos 2(angle - lambda) >= 0,
/// party 2 the same (or the opposite when anti is set).
inline SLHVModel deterministic_model(std::size_t n, bool anti) {
    auto sign_fn = [n](bool flip) {
        return [flip, n](Angle a, std::size_t l) {
            double lambda = std::numbers::pi * static_cast<double>(l) / static_cast<double>(n);
            bool plus = std::cos(2.0 * (a.rad() - lambda)) >= 0.0;
            if (flip) {
                plus = !plus;
            }
            return ProbTriple{plus ? 1.0 : 0.0, plus ? 0.0 : 1.0, 0.0};
        };
    };
    return SLHVModel(HiddenVariableSpace::uniform_grid(n), ResponseFunction::direct(sign_fn(false)),
                     ResponseFunction::direct(sign_fn(anti)));
}

}  // namespace effchsh::testing

#endif  // EFFCHSH_TESTS_RANDOM_MODELS_H
