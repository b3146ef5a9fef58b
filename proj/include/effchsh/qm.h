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

#ifndef EFFCHSH_QM_H
#define EFFCHSH_QM_H

// Phenomenological quantum prediction for a polarization-entangled photon
// pair measured with lossy detectors and collimators.

#include "json.hpp"

#include "effchsh/angle.h"

namespace effchsh {

/// Detector efficiencies eta, collimator factors f and correlation strength F.
class QMModelParams {
   public:
    /// Throws DomainError unless eta, f in (0, 1] and F in [0, 1].
    QMModelParams(double eta1, double eta2, double f1, double f2, double F);

    static QMModelParams perfect(double F = 1.0) { return {1.0, 1.0, 1.0, 1.0, F}; }
    /// Symmetric parameters, f1 = f2 = sqrt(f12).
    static QMModelParams symmetric(double eta, double f12, double F);

    double eta1() const { return eta1_; }
    double eta2() const { return eta2_; }
    double f1() const { return f1_; }
    double f2() const { return f2_; }
    double F() const { return F_; }
    double f12() const { return f1_ * f2_; }
    /// eta1 eta2 f12, written eta^2 f12 when the detectors match.
    double pair_detection() const { return eta1_ * eta2_ * f12(); }

   private:
    double eta1_;
    double eta2_;
    double f1_;
    double f2_;
    double F_;
};

/// P_rq = 1/4 eta1 eta2 f12 [1 + r q F cos 2(a - b)] for r, q = +-1.
double qm_joint_prob(const QMModelParams &params, Angle a, Angle b, int r, int q);

/// eta1 eta2 f12 F cos 2(a - b).
double qm_correlation(const QMModelParams &params, Angle a, Angle b);

/// F cos 2(a - b); the detection factors cancel.
double qm_effective_correlation(const QMModelParams &params, Angle a, Angle b);

/// F |3 cos(phi) - cos(3 phi)|, to be compared with 2.
///
/// phi is the doubled physical separation: polarizers 22.5 degrees apart
/// give phi = pi/4 and a bracket of 2 sqrt(2).
double violation_lhs(double F, double phi);

/// E_eff(a,b) - E_eff(a,b') + E_eff(a',b) + E_eff(a',b').
double qm_ueff(const QMModelParams &params, const SettingsQuad &quad);

/// 2 / (eta1 eta2 f12): the bound on U_eff implied by the full-sample CHSH inequality.
double qm_appendix_bound(const QMModelParams &params);

nlohmann::json to_json(const QMModelParams &params);
/// Reads {"eta1","eta2","f1","f2","F"} or the shorthand {"eta","f","F"}.
QMModelParams qm_params_from_json(const nlohmann::json &j);

}  // namespace effchsh

#endif  // EFFCHSH_QM_H
