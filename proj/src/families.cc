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

#include "effchsh/families.h"

#include <algorithm>
#include <cmath>
#include <memory>

namespace effchsh {

AdversaryFamily::AdversaryFamily(std::string name, std::vector<std::string> parameter_names, std::vector<double> lower,
                                 std::vector<double> upper, Builder builder)
    : name_(std::move(name)),
      names_(std::move(parameter_names)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      builder_(std::move(builder)) {
    if (lower_.size() != names_.size() || upper_.size() != names_.size()) {
        throw DomainError("family " + name_ + ": bounds and names differ in length");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!(lower_[i] <= upper_[i])) {
            throw DomainError("family " + name_ + ": empty box for " + names_[i]);
        }
    }
}

Instantiation AdversaryFamily::instantiate(std::span<const double> params, std::size_t grid) const {
    if (params.size() != names_.size()) {
        throw DomainError("family " + name_ + " expects " + std::to_string(names_.size()) + " parameters");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i] >= lower_[i] && params[i] <= upper_[i])) {
            throw DomainError("family " + name_ + ": " + names_[i] + " = " + std::to_string(params[i]) +
                              " outside [" + std::to_string(lower_[i]) + ", " + std::to_string(upper_[i]) + "]");
        }
    }
    return builder_(params, grid);
}

AdversaryFamily AdversaryFamily::freeze(const std::string &parameter, double value) const {
    std::size_t i = index_of(parameter);
    if (!(value >= lower_[i] && value <= upper_[i])) {
        throw DomainError("cannot freeze " + parameter + " outside its box");
    }
    AdversaryFamily out = *this;
    out.lower_[i] = value;
    out.upper_[i] = value;
    return out;
}

std::size_t AdversaryFamily::index_of(const std::string &parameter) const {
    auto it = std::find(names_.begin(), names_.end(), parameter);
    if (it == names_.end()) {
        throw InputError("family " + name_ + " has no parameter '" + parameter + "'");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

std::vector<double> AdversaryFamily::parameters_from_json(const nlohmann::json &j) const {
    if (!j.is_object()) {
        throw InputError("family parameters must be a JSON object");
    }
    for (const auto &[key, _] : j.items()) {
        index_of(key);
    }
    std::vector<double> out;
    for (const auto &n : names_) {
        if (!j.contains(n) || !j.at(n).is_number()) {
            throw InputError("family " + name_ + ": parameter '" + n + "' missing or not a number");
        }
        out.push_back(j.at(n).get<double>());
    }
    return out;
}

nlohmann::json AdversaryFamily::parameters_to_json(std::span<const double> params) const {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < names_.size() && i < params.size(); ++i) {
        j[names_[i]] = params[i];
    }
    return j;
}

AdversaryFamily threshold_detection_family() {
    auto build = [](std::span<const double> p, std::size_t grid) {
        auto space = HiddenVariableSpace::uniform_grid(grid);
        auto points = std::make_shared<std::vector<double>>(space.points().begin(), space.points().end());
        auto party = [points](double theta) {
            return ResponseFunction::direct([points, theta](Angle angle, std::size_t l) {
                double c = std::cos(2.0 * (angle.rad() - points->at(l)));
                if (std::fabs(c) < theta) {
                    return ProbTriple{0.0, 0.0, 1.0};
                }
                return c >= 0.0 ? ProbTriple{1.0, 0.0, 0.0} : ProbTriple{0.0, 1.0, 0.0};
            });
        };
        return Instantiation{SLHVModel(std::move(space), party(p[0]), party(p[1])), false};
    };
    return AdversaryFamily("threshold-detection", {"theta1", "theta2"}, {0.0, 0.0}, {0.999, 0.999}, build);
}

AdversaryFamily modulated_p0_family() {
    auto build = [](std::span<const double> p, std::size_t grid) {
        const double c0 = p[0];
        const double c1 = p[1];
        const double sharpness = p[2];
        auto space = HiddenVariableSpace::uniform_grid(grid);
        auto points = std::make_shared<std::vector<double>>(space.points().begin(), space.points().end());
        auto ideal = [points, sharpness](Angle angle, std::size_t l) {
            double c = std::cos(2.0 * (angle.rad() - points->at(l)));
            double s = std::pow(std::fabs(c), 1.0 / sharpness);
            double plus = 0.5 * (1.0 + (c >= 0.0 ? s : -s));
            return TwoOutcome{plus, 1.0 - plus};
        };
        auto efficiency = [points, c0, c1](Angle angle, std::size_t l) {
            double c = std::cos(2.0 * (angle.rad() - points->at(l)));
            return 1.0 - std::clamp(c0 + c1 * c, 0.0, 1.0);
        };
        auto party = [&] {
            return ResponseFunction::split(ResponseFunction::IdealFn(ideal),
                                           ResponseFunction::ChannelBlindEfficiencyFn(efficiency));
        };
        bool projected = c0 + std::fabs(c1) > 1.0 || c0 - std::fabs(c1) < 0.0;
        return Instantiation{SLHVModel(std::move(space), party(), party()), projected};
    };
    return AdversaryFamily("modulated-p0", {"c0", "c1", "sharpness"}, {0.0, -1.0, 1.0}, {1.0, 1.0, 16.0}, build);
}

AdversaryFamily family_by_name(const std::string &name) {
    if (name == "threshold-detection") {
        return threshold_detection_family();
    }
    if (name == "modulated-p0") {
        return modulated_p0_family();
    }
    throw InputError("unknown family '" + name + "' (expected threshold-detection or modulated-p0)");
}

}  // namespace effchsh
