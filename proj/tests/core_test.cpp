//
// Copyright 2026 The simplexcert Authors
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
//

#include "simplexcert/core.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"

namespace simplexcert {
namespace {

TEST(MakeBoundsTest, PassesInteriorValuesThrough) {
  const ExpectationBounds b =
      make_bounds(0.9, 0.05, ExpectationMode::kMultinomial);
  EXPECT_EQ(b.e0(), 0.9);
  EXPECT_EQ(b.e1(), 0.05);
  EXPECT_EQ(b.n(), 0);
  EXPECT_EQ(b.alpha(), 0.0);
  EXPECT_TRUE(b.is_analytic());
  EXPECT_EQ(b.mode(), ExpectationMode::kMultinomial);
}

TEST(MakeBoundsTest, ClampsEndpoints) {
  const ExpectationBounds b =
      make_bounds(1.0, 0.0, ExpectationMode::kMultinomial);
  EXPECT_EQ(b.e0(), 1.0 - 1e-12);
  EXPECT_EQ(b.e1(), 1e-12);
}

TEST(MakeBoundsTest, AcceptsCrossedBounds) {
  const ExpectationBounds b = make_bounds(0.5, 0.6, ExpectationMode::kSoftmax);
  EXPECT_FALSE(b.separated());
}

TEST(MakeBoundsTest, RejectsOutOfRange) {
  EXPECT_THROW(make_bounds(1.1, 0.0, ExpectationMode::kSoftmax),
               ValidationError);
  EXPECT_THROW(make_bounds(0.5, -0.1, ExpectationMode::kSoftmax),
               ValidationError);
  EXPECT_THROW(make_bounds(std::nan(""), 0.1, ExpectationMode::kSoftmax),
               ValidationError);
}

TEST(MakeBoundsTest, IdempotentOnClampedValues) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ExpectationBounds once =
        make_bounds(u(rng), u(rng), ExpectationMode::kMultinomial);
    const ExpectationBounds twice =
        make_bounds(once.e0(), once.e1(), ExpectationMode::kMultinomial);
    EXPECT_EQ(once, twice);
  }
  const ExpectationBounds edge =
      make_bounds(1.0, 0.0, ExpectationMode::kMultinomial);
  EXPECT_EQ(make_bounds(edge.e0(), edge.e1(), ExpectationMode::kMultinomial),
            edge);
}

// Fuzzed construction: anything outside the documented domains throws,
// anything inside constructs.
TEST(CoreTypesTest, FuzzedInvalidInputsAreRejected) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> wide(-2.0, 3.0);
  for (int i = 0; i < 5000; ++i) {
    const double e0 = wide(rng);
    const double e1 = wide(rng);
    const bool valid = e0 >= 0 && e0 <= 1 && e1 >= 0 && e1 <= 1;
    if (valid) {
      EXPECT_NO_THROW(
          ExpectationBounds::create(e0, e1, ExpectationMode::kSoftmax));
    } else {
      EXPECT_THROW(ExpectationBounds::create(e0, e1, ExpectationMode::kSoftmax),
                   ValidationError);
    }
    const bool simplex = e1 >= 0 && e0 >= e1 && e0 + e1 <= 1.0;
    if (simplex) {
      EXPECT_NO_THROW(SimplexPoint::create(e0, e1));
    } else if (e0 + e1 > 1.0 + 1e-9 || e1 < 0 || e0 < e1) {
      EXPECT_THROW(SimplexPoint::create(e0, e1), ValidationError);
    }
    const double sigma = wide(rng);
    if (sigma > 0) {
      EXPECT_NO_THROW(NoiseConfig::create(sigma));
    } else {
      EXPECT_THROW(NoiseConfig::create(sigma), ValidationError);
    }
  }
  EXPECT_THROW(
      ExpectationBounds::create(0.5, 0.2, ExpectationMode::kSoftmax, -1),
      ValidationError);
  EXPECT_THROW(
      ExpectationBounds::create(0.5, 0.2, ExpectationMode::kSoftmax, 10, 1.5),
      ValidationError);
  EXPECT_THROW(NoiseConfig::create(1.0, 0.0), ValidationError);
  EXPECT_THROW(NoiseConfig::create(std::numeric_limits<double>::infinity()),
               ValidationError);
}

TEST(CertificationOutcomeTest, EnsembleIsMaxOfRadii) {
  const MechanismSet set{MechanismId::kCohen, MechanismId::kLi,
                         MechanismId::kImprovedDp};
  const CertificationOutcome out =
      CertificationOutcome::from_radii(2, {1.2, 1.4, 0.0, 0.9}, set);
  EXPECT_EQ(out.radius_ensemble(), 1.4);
  EXPECT_FALSE(out.abstained());
  EXPECT_EQ(out.best_mechanism(), MechanismId::kLi);
  EXPECT_EQ(out.predicted_class(), 2);
}

TEST(CertificationOutcomeTest, TieBreakFollowsEnumOrder) {
  const CertificationOutcome out = CertificationOutcome::from_radii(
      0, {0.0, 1.0, 1.0, 1.0}, MechanismSet::all());
  EXPECT_EQ(out.best_mechanism(), MechanismId::kLi);
}

TEST(CertificationOutcomeTest, RejectsInvalidRadii) {
  EXPECT_THROW(
      CertificationOutcome::from_radii(0, {-1.0, 0, 0, 0}, MechanismSet::all()),
      ValidationError);
  EXPECT_THROW(CertificationOutcome::from_radii(0, {1.0, 0, 0, 0},
                                                MechanismSet{MechanismId::kLi}),
               ValidationError);
}

TEST(CertificationOutcomeTest, AbstentionZeroesEverything) {
  const CertificationOutcome out =
      CertificationOutcome::abstain(1, MechanismSet::all());
  EXPECT_TRUE(out.abstained());
  for (MechanismId id : kAllMechanisms) EXPECT_EQ(out.radius(id), 0.0);
  EXPECT_FALSE(out.best_mechanism().has_value());
}

TEST(MechanismSetTest, ParsesAndPrints) {
  const MechanismSet set = MechanismSet::parse("improved_dp,cohen");
  EXPECT_EQ(set.to_string(), "cohen|improved_dp");
  EXPECT_EQ(MechanismSet::parse(set.to_string()), set);
  EXPECT_THROW(MechanismSet::parse("cohen|bogus"), ValidationError);
  EXPECT_TRUE(MechanismSet::parse("").empty());
}

}  // namespace
}  // namespace simplexcert
