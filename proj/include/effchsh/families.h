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

#ifndef EFFCHSH_FAMILIES_H
#define EFFCHSH_FAMILIES_H

// Parametric SLHV families on a uniform lambda grid over [0, pi).

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "effchsh/lhv.h"

namespace effchsh {

inline constexpr std::size_t kDefaultModelGrid = 360;
inline constexpr std::size_t kDefaultAdversaryGrid = 720;

struct Instantiation {
    SLHVModel model;
    /// Some raw probability fell outside [0, 1] for some setting and was clipped.
    bool projected = false;
};

/// A box-bounded parameter vector mapped to SLHV models.
class AdversaryFamily {
   public:
    using Builder = std::function<Instantiation(std::span<const double>, std::size_t grid)>;

    AdversaryFamily(std::string name, std::vector<std::string> parameter_names, std::vector<double> lower,
                    std::vector<double> upper, Builder builder);

    const std::string &name() const { return name_; }
    std::size_t dimension() const { return names_.size(); }
    const std::vector<std::string> &parameter_names() const { return names_; }
    const std::vector<double> &lower() const { return lower_; }
    const std::vector<double> &upper() const { return upper_; }
    /// A parameter whose box has zero width.
    bool is_frozen(std::size_t i) const { return lower_.at(i) == upper_.at(i); }

    /// Throws DomainError for a wrong length or an out-of-box value.
    Instantiation instantiate(std::span<const double> params, std::size_t grid) const;

    /// Same family with one parameter pinned to `value`.
    AdversaryFamily freeze(const std::string &parameter, double value) const;

    std::size_t index_of(const std::string &parameter) const;

    /// Parameter vector from {"name": value, ...}; every parameter required.
    std::vector<double> parameters_from_json(const nlohmann::json &j) const;
    nlohmann::json parameters_to_json(std::span<const double> params) const;

   private:
    std::string name_;
    std::vector<std::string> names_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    Builder builder_;
};

/// Party k reports sign cos 2(angle - lambda) and is detected only when
/// |cos 2(angle - lambda)| >= theta_k. Parameters theta1, theta2 in [0, 0.999].
/// theta = 0 detects always.
AdversaryFamily threshold_detection_family();

/// Non-detection p0 = c0 + c1 cos 2(angle - lambda), clipped to [0, 1], on
/// top of an ideal response p+ = (1 + sgn(c) |c|^(1/sharpness)) / 2 with
/// c = cos 2(angle - lambda). sharpness = 1 is Malus's law; large values
/// approach a deterministic sign response. c1 = 0 makes p0 angle independent.
AdversaryFamily modulated_p0_family();

/// "threshold-detection" or "modulated-p0". Throws InputError.
AdversaryFamily family_by_name(const std::string &name);

}  // namespace effchsh

#endif  // EFFCHSH_FAMILIES_H
