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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "effchsh/errors.h"
#include "support/random_models.h"

namespace effchsh {
namespace {

using testing::Assumption;
using testing::constant_model;
using testing::random_model;

const Angle kA = Angle::degrees(10.0);
const Angle kB = Angle::degrees(55.0);

SLHVModel split_model(TwoOutcome ideal, double eff_plus, double eff_minus) {
    auto r = ResponseFunction::split([ideal](Angle, std::size_t) { return ideal; },
                                     [eff_plus, eff_minus](Angle, std::size_t, Outcome o) {
                                         return o == Outcome::Plus ? eff_plus : eff_minus;
                                     });
    return SLHVModel(HiddenVariableSpace::uniform_grid(1), r, r);
}

TEST(AngleTest, DegreesWrapModuloHalfTurn) {
    EXPECT_NEAR(Angle::degrees(190.0).deg(), 10.0, 1e-12);
    EXPECT_NEAR(Angle::degrees(-22.5).deg(), 157.5, 1e-12);
    EXPECT_EQ(Angle::degrees(180.0).rad(), 0.0);
    EXPECT_TRUE(Angle::degrees(179.9999999999).near(Angle::degrees(0.0)));
    EXPECT_THROW(Angle::degrees(NAN), DomainError);
}

TEST(AngleTest, ParseQuad) {
    SettingsQuad q = parse_quad("0, 45,22.5,67.5");
    EXPECT_NEAR(q.b_prime.deg(), 67.5, 1e-12);
    EXPECT_THROW(parse_quad("0,45,22.5"), InputError);
    EXPECT_THROW(parse_quad("0,45,x,67.5"), InputError);
}

TEST(HiddenVariableSpaceTest, RejectsBadWeights) {
    EXPECT_THROW(HiddenVariableSpace({0.0, 1.0}, {0.5, 0.6}), ValidationError);
    EXPECT_THROW(HiddenVariableSpace({0.0, 1.0}, {1.2, -0.2}), ValidationError);
    EXPECT_THROW(HiddenVariableSpace({0.0}, {0.5, 0.5}), ValidationError);
    EXPECT_THROW(HiddenVariableSpace({}, {}), ValidationError);
    EXPECT_NO_THROW(HiddenVariableSpace({0.0, 1.0}, {0.25, 0.75}));
}

TEST(ResponseTest, PerfectEfficiencyGivesNoNondetection) {
    SLHVModel m = split_model({0.5, 0.5}, 1.0, 1.0);
    ProbTriple t = response(m, Party::One, kA, 0);
    EXPECT_DOUBLE_EQ(t.plus, 0.5);
    EXPECT_DOUBLE_EQ(t.minus, 0.5);
    EXPECT_DOUBLE_EQ(t.zero, 0.0);
}

TEST(ResponseTest, SplitComposition) {
    SLHVModel m = split_model({1.0, 0.0}, 0.6, 0.6);
    ProbTriple t = response(m, Party::Two, kA, 0);
    EXPECT_DOUBLE_EQ(t.plus, 0.6);
    EXPECT_DOUBLE_EQ(t.minus, 0.0);
    EXPECT_NEAR(t.zero, 0.4, 1e-15);
}

TEST(ResponseTest, LambdaOutOfRange) {
    SLHVModel m = constant_model({0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}, 3);
    EXPECT_THROW(response(m, Party::One, kA, 3), IndexError);
}

TEST(ResponseTest, NonNormalizedTripleNamesLocation) {
    SLHVModel m = constant_model({0.5, 0.4, 0.0}, {0.5, 0.5, 0.0});
    try {
        response(m, Party::One, kA, 0);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError &e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("party 1"), std::string::npos) << msg;
        EXPECT_NE(msg.find("lambda 0"), std::string::npos) << msg;
    }
}

TEST(ResponseTest, NonNormalizedIdealRejected) {
    SLHVModel m = split_model({0.7, 0.7}, 1.0, 1.0);
    EXPECT_THROW(response(m, Party::One, kA, 0), ValidationError);
}

TEST(ResponseTest, EfficiencyOutOfRangeRejected) {
    SLHVModel m = split_model({0.5, 0.5}, 1.2, 1.0);
    EXPECT_THROW(response(m, Party::One, kA, 0), ValidationError);
}

TEST(NondetectTest, Examples) {
    EXPECT_DOUBLE_EQ(nondetect_prob(split_model({0.3, 0.7}, 1.0, 1.0), Party::One, kA, 0), 0.0);
    auto r = ResponseFunction::split([](Angle, std::size_t) { return TwoOutcome{0.3, 0.7}; },
                                     [](Angle, std::size_t) { return 0.7; });
    SLHVModel m(HiddenVariableSpace::uniform_grid(2), r, r);
    EXPECT_NEAR(nondetect_prob(m, Party::One, kA, 1), 0.3, 1e-15);
}

TEST(AlphaTest, Examples) {
    EXPECT_DOUBLE_EQ(alpha(split_model({0.2, 0.8}, 1.0, 1.0), Party::One, kA, 0), 1.0);
    EXPECT_DOUBLE_EQ(alpha(constant_model({0.3, 0.2, 0.5}, {0.3, 0.2, 0.5}), Party::One, kA, 0), 0.5);
}

TEST(JointProbTest, DeterministicOpposite) {
    SLHVModel m = constant_model({1.0, 0.0, 0.0}, {0.0, 1.0, 0.0});
    for (Outcome r : kAllOutcomes) {
        for (Outcome q : kAllOutcomes) {
            double expected = (r == Outcome::Plus && q == Outcome::Minus) ? 1.0 : 0.0;
            EXPECT_DOUBLE_EQ(joint_prob(m, kA, kB, 0, r, q), expected);
        }
    }
}

TEST(JointProbTest, IndependentHalves) {
    SLHVModel m = constant_model({0.5, 0.5, 0.0}, {0.5, 0.5, 0.0});
    for (Outcome r : {Outcome::Plus, Outcome::Minus}) {
        for (Outcome q : {Outcome::Plus, Outcome::Minus}) {
            EXPECT_DOUBLE_EQ(joint_prob(m, kA, kB, 0, r, q), 0.25);
        }
    }
}

TEST(LocalAverageTest, Examples) {
    EXPECT_DOUBLE_EQ(local_average(constant_model({0.5, 0.5, 0.0}, {0.5, 0.5, 0.0}), Party::One, kA, 0), 0.0);
    EXPECT_DOUBLE_EQ(local_average(constant_model({0.6, 0.0, 0.4}, {0.5, 0.5, 0.0}), Party::One, kA, 0), 0.6);
}

TEST(EffectiveLocalAverageTest, Examples) {
    EXPECT_NEAR(effective_local_average(constant_model({0.3, 0.1, 0.6}, {0.3, 0.1, 0.6}), Party::One, kA, 0), 0.5,
                1e-15);
    SLHVModel perfect = split_model({0.8, 0.2}, 1.0, 1.0);
    EXPECT_EQ(effective_local_average(perfect, Party::One, kA, 0), local_average(perfect, Party::One, kA, 0));
}

TEST(EffectiveLocalAverageTest, NoDetectionIsDegenerate) {
    SLHVModel m = constant_model({0.0, 0.0, 1.0}, {0.5, 0.5, 0.0});
    try {
        effective_local_average(m, Party::One, kA, 0);
        FAIL() << "expected DegenerateModelError";
    } catch (const DegenerateModelError &e) {
        EXPECT_NE(std::string(e.what()).find("party 1"), std::string::npos);
    }
}

// Property suites over random models of every kind.
TEST(LhvPropertyTest, ThousandRandomModels) {
    std::mt19937_64 g(20260101);
    const std::array<Assumption, 3> kinds = {Assumption::SolutionI, Assumption::SolutionII, Assumption::General};
    for (int i = 0; i < 1000; ++i) {
        SLHVModel m = random_model(g, kinds[i % 3]);
        Angle a = Angle::degrees(testing::uniform(g, 0, 180));
        Angle b = Angle::degrees(testing::uniform(g, 0, 180));
        for (std::size_t l = 0; l < m.space().size(); ++l) {
            for (auto [party, angle] : {std::pair{Party::One, a}, std::pair{Party::Two, b}}) {
                ProbTriple t = response(m, party, angle, l);
                ASSERT_NEAR(t.sum(), 1.0, 1e-12);
                double al = alpha(m, party, angle, l);
                ASSERT_NEAR(nondetect_prob(m, party, angle, l), 1.0 - al, 1e-12);
                ASSERT_LE(t.plus, al + 1e-15);
                ASSERT_LE(t.minus, al + 1e-15);
                ASSERT_LE(std::fabs(local_average(m, party, angle, l)), al + 1e-15);
                if (t.zero < 1.0) {
                    ASSERT_LE(std::fabs(effective_local_average(m, party, angle, l)), 1.0 + 1e-12);
                }
            }
            double total = 0.0;
            for (Outcome r : kAllOutcomes) {
                for (Outcome q : kAllOutcomes) {
                    total += joint_prob(m, a, b, l, r, q);
                }
            }
            ASSERT_NEAR(total, 1.0, 1e-12);
        }
    }
}

TEST(Solution1Test, LambdaOnlyNondetectionPasses) {
    std::mt19937_64 g(7);
    SLHVModel m = random_model(g, Assumption::SolutionI, 5, 5);
    Solution1Report r = validate_solution1(m, SettingsQuad::standard());
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.deviation, 1e-12);
}

TEST(Solution1Test, AngleDependentNondetectionFails) {
    auto r1 = ResponseFunction::split([](Angle, std::size_t) { return TwoOutcome{0.5, 0.5}; },
                                      [](Angle a, std::size_t l) {
                                          double lambda = std::numbers::pi * static_cast<double>(l) / 4.0;
                                          return 1.0 - (0.1 + 0.05 * std::cos(2.0 * (a.rad() - lambda)));
                                      });
    auto r2 = ResponseFunction::split([](Angle, std::size_t) { return TwoOutcome{0.5, 0.5}; },
                                      [](Angle, std::size_t) { return 1.0; });
    SLHVModel m(HiddenVariableSpace::uniform_grid(4), r1, r2);
    Solution1Report r = validate_solution1(m, SettingsQuad::standard());
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.deviation, 0.0);
    ASSERT_TRUE(r.worst_party.has_value());
    EXPECT_EQ(*r.worst_party, Party::One);
    // cos 2(0 - 0) - cos 2(45 deg - 0) = 1 at lambda 0, so the spread is 0.05.
    EXPECT_NEAR(r.deviation, 0.05, 1e-12);
}

TEST(Solution1Test, PerfectModelPassesWithZeroDeviation) {
    Solution1Report r = validate_solution1(testing::deterministic_model(8, false), SettingsQuad::standard());
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.deviation, 0.0);
}

TEST(Solution1Test, EmptyAngleListIsPrecondition) {
    std::vector<Angle> none;
    std::vector<Angle> one = {kA};
    EXPECT_THROW(validate_solution1(constant_model({1, 0, 0}, {1, 0, 0}), none, one), PreconditionError);
}

TEST(Solution2Test, ConstantNondetectionPasses) {
    SLHVModel m = constant_model({0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, 3);
    Solution2Report r = validate_solution2(m, SettingsQuad::standard());
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.p0_at(Party::One, Angle::degrees(0)), 0.25, 1e-15);
    EXPECT_NEAR(r.p0_at(Party::Two, Angle::degrees(67.5)), 0.25, 1e-15);
}

TEST(Solution2Test, LambdaDependentNondetectionFails) {
    auto r = ResponseFunction::direct([](Angle, std::size_t l) {
        double p0 = l == 0 ? 0.2 : 0.3;
        return ProbTriple{(1 - p0) / 2, (1 - p0) / 2, p0};
    });
    SLHVModel m(HiddenVariableSpace::uniform_grid(2), r, r);
    Solution2Report rep = validate_solution2(m, SettingsQuad::standard());
    EXPECT_FALSE(rep.passed);
    EXPECT_NEAR(rep.deviation, 0.1, 1e-12);
}

TEST(Solution2Test, PerfectModelPassesWithZeroP0) {
    Solution2Report r = validate_solution2(testing::deterministic_model(6, true), SettingsQuad::standard());
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.p0_at(Party::One, Angle::degrees(45)), 0.0);
}

TEST(RestrictTest, TabulatedCopyMatchesOriginalAndRejectsOtherAngles) {
    std::mt19937_64 g(99);
    SLHVModel m = random_model(g, Assumption::General, 6, 6);
    SettingsQuad q = SettingsQuad::standard();
    SLHVModel r = restrict_to(m, q);
    for (std::size_t l = 0; l < 6; ++l) {
        ProbTriple x = response(m, Party::One, q.a_prime, l);
        ProbTriple y = response(r, Party::One, q.a_prime, l);
        EXPECT_EQ(x.plus, y.plus);
        EXPECT_EQ(x.zero, y.zero);
    }
    EXPECT_THROW(response(r, Party::One, Angle::degrees(1.0), 0), DomainError);
}

}  // namespace
}  // namespace effchsh
