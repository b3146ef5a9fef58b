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

#include "effchsh/qm.h"

#include <cmath>
#include <string>

namespace effchsh {

namespace {

void check_open_unit(const char *name, double v) {
    if (!(v > 0.0 && v <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in (0, 1], got " + std::to_string(v));
    }
}

}  // namespace

QMModelParams::QMModelParams(double eta1, double eta2, double f1, double f2, double F)
    : eta1_(eta1), eta2_(eta2), f1_(f1), f2_(f2), F_(F) {
    check_open_unit("eta1", eta1);
    check_open_unit("eta2", eta2);
    check_open_unit("f1", f1);
    check_open_unit("f2", f2);
    if (!(F >= 0.0 && F <= 1.0)) {
        throw DomainError("F must lie in [0, 1], got " + std::to_string(F));
    }
}

QMModelParams QMModelParams::symmetric(double eta, double f12, double F) {
    if (!(f12 > 0.0 && f12 <= 1.0)) {
        throw DomainError("f12 must lie in (0, 1], got " + std::to_string(f12));
    }
    double f = std::sqrt(f12);
    return {eta, eta, f, f, F};
}

double qm_joint_prob(const QMModelParams &params, Angle a, Angle b, int r, int q) {
    if ((r != 1 && r != -1) || (q != 1 && q != -1)) {
        throw DomainError("qm_joint_prob: outcomes must be +1 or -1");
    }
    return 0.25 * params.pair_detection() * (1.0 + r * q * params.F() * cos2diff(a, b));
}

double qm_correlation(const QMModelParams &params, Angle a, Angle b) {
    return params.pair_detection() * params.F() * cos2diff(a, b);
}

double qm_effective_correlation(const QMModelParams &params, Angle a, Angle b) {
    // Cancelled form: bitwise independent of eta and f.
    return params.F() * cos2diff(a, b);
}

double violation_lhs(double F, double phi) {
    if (!(F >= 0.0 && F <= 1.0)) {
        throw DomainError("F must lie in [0, 1]");
    }
    return F * std::fabs(3.0 * std::cos(phi) - std::cos(3.0 * phi));
}

double qm_ueff(const QMModelParams &params, const SettingsQuad &quad) {
    double total = 0.0;
    for (PairIndex p : kAllPairs) {
        total += kChshSigns[static_cast<std::size_t>(p)] *
                 qm_effective_correlation(params, quad.first(p), quad.second(p));
    }
    return total;
}

double qm_appendix_bound(const QMModelParams &params) { return 2.0 / params.pair_detection(); }

nlohmann::json to_json(const QMModelParams &p) {
    return {{"eta1", p.eta1()}, {"eta2", p.eta2()}, {"f1", p.f1()}, {"f2", p.f2()}, {"F", p.F()}};
}

QMModelParams qm_params_from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw InputError("QM parameters must be a JSON object");
    }
    auto get = [&](const char *key, const char *fallback) -> double {
        if (j.contains(key)) {
            if (!j.at(key).is_number()) {
                throw InputError(std::string("QM parameter '") + key + "' must be a number");
            }
            return j.at(key).get<double>();
        }
        if (fallback != nullptr && j.contains(fallback)) {
            if (!j.at(fallback).is_number()) {
                throw InputError(std::string("QM parameter '") + fallback + "' must be a number");
            }
            return j.at(fallback).get<double>();
        }
        throw InputError(std::string("QM parameters: missing '") + key + "'");
    };
    return QMModelParams(get("eta1", "eta"), get("eta2", "eta"), get("f1", "f"), get("f2", "f"), get("F", nullptr));
}

}  // namespace effchsh
