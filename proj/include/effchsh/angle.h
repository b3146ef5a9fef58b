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

#ifndef EFFCHSH_ANGLE_H
#define EFFCHSH_ANGLE_H

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "effchsh/errors.h"

namespace effchsh {

/// Polarizer transmission-axis angle measured from the x-axis.
///
/// Polarizer settings are pi-periodic, so the stored value is always
/// canonicalized to [0, pi).
class Angle {
   public:
    constexpr Angle() = default;

    static Angle radians(double value) {
        if (!std::isfinite(value)) {
            throw DomainError("angle must be finite");
        }
        double v = std::fmod(value, std::numbers::pi);
        if (v < 0) {
            v += std::numbers::pi;
        }
        if (v >= std::numbers::pi) {
            v = 0.0;
        }
        return Angle(v);
    }

    /// Reduces mod 180 in degrees first so that e.g. 22.5 maps to pi/8 exactly.
    static Angle degrees(double value) {
        if (!std::isfinite(value)) {
            throw DomainError("angle must be finite");
        }
        double v = std::fmod(value, 180.0);
        if (v < 0) {
            v += 180.0;
        }
        return radians(v * (std::numbers::pi / 180.0));
    }

    double rad() const { return value_; }
    double deg() const { return value_ * (180.0 / std::numbers::pi); }

    /// Equality up to `tol_deg` on the circle of period 180 degrees.
    bool near(Angle other, double tol_deg = 1e-9) const {
        double d = std::fabs(deg() - other.deg());
        return std::min(d, 180.0 - d) <= tol_deg;
    }

    friend bool operator==(Angle, Angle) = default;

   private:
    explicit constexpr Angle(double v) : value_(v) {}
    double value_ = 0.0;
};

/// cos 2(x - y); the only angular dependence a polarizer pair can have.
inline double cos2diff(Angle x, Angle y) { return std::cos(2.0 * (x.rad() - y.rad())); }

/// Index of a setting pair in a CHSH run. Order matches the sign pattern
/// E(a,b) - E(a,b') + E(a',b) + E(a',b').
enum class PairIndex { AB = 0, ABp = 1, ApB = 2, ApBp = 3 };

inline constexpr std::array<PairIndex, 4> kAllPairs = {PairIndex::AB, PairIndex::ABp, PairIndex::ApB,
                                                       PairIndex::ApBp};
inline constexpr std::array<double, 4> kChshSigns = {+1.0, -1.0, +1.0, +1.0};

inline const char *pair_label(PairIndex p) {
    switch (p) {
        case PairIndex::AB:
            return "ab";
        case PairIndex::ABp:
            return "ab'";
        case PairIndex::ApB:
            return "a'b";
        case PairIndex::ApBp:
            return "a'b'";
    }
    return "?";
}

/// The four analyzer settings of a CHSH run.
struct SettingsQuad {
    Angle a;
    Angle a_prime;
    Angle b;
    Angle b_prime;

    static SettingsQuad degrees(double a, double ap, double b, double bp) {
        return {Angle::degrees(a), Angle::degrees(ap), Angle::degrees(b), Angle::degrees(bp)};
    }

    /// Adjacent separations of 22.5 degrees: (a, a', b, b') = (0, 45, 22.5, 67.5).
    static SettingsQuad standard() { return degrees(0.0, 45.0, 22.5, 67.5); }

    Angle first(PairIndex p) const { return (p == PairIndex::AB || p == PairIndex::ABp) ? a : a_prime; }
    Angle second(PairIndex p) const { return (p == PairIndex::AB || p == PairIndex::ApB) ? b : b_prime; }

    std::array<double, 4> to_degrees() const { return {a.deg(), a_prime.deg(), b.deg(), b_prime.deg()}; }
};

/// Parses "a,a',b,b'" in degrees.
SettingsQuad parse_quad(const std::string &text);

}  // namespace effchsh

#endif  // EFFCHSH_ANGLE_H
