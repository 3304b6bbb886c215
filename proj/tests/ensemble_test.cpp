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

#include "simplexcert/ensemble.hpp"

#include <random>

#include "gtest/gtest.h"

namespace simplexcert {
namespace {

const NoiseConfig kUnitNoise = NoiseConfig::create(1.0);

TEST(EnsembleConfigTest, SoftmaxAllowsOnlyPrivacyMechanisms) {
  EXPECT_THROW(EnsembleConfig::create(MechanismSet{MechanismId::kCohen},
                                      ExpectationMode::kSoftmax),
               ValidationError);
  EXPECT_THROW(EnsembleConfig::create(
                   MechanismSet{MechanismId::kLi, MechanismId::kImprovedDp},
                   ExpectationMode::kSoftmax),
               ValidationError);
  EXPECT_NO_THROW(EnsembleConfig::create(
      MechanismSet{MechanismId::kLecuyer, MechanismId::kImprovedDp},
      ExpectationMode::kSoftmax));
  EXPECT_NO_THROW(EnsembleConfig::create(MechanismSet::all(),
                                         ExpectationMode::kMultinomial));
  EXPECT_THROW(
      EnsembleConfig::create(MechanismSet{}, ExpectationMode::kMultinomial),
      ValidationError);
  EXPECT_EQ(EnsembleConfig::full(ExpectationMode::kSoftmax).enabled(),
            (MechanismSet{MechanismId::kLecuyer, MechanismId::kImprovedDp}));
}

TEST(CertifyEnsembleTest, TakesMaximum) {
  const ExpectationBounds b =
      make_bounds(0.9, 0.05, ExpectationMode::kMultinomial);
  const CertificationOutcome out = certify_ensemble(
      b, kUnitNoise, EnsembleConfig::full(ExpectationMode::kMultinomial));
  EXPECT_EQ(out.radius_ensemble(),
            std::max({out.radius_cohen(), out.radius_li(), out.radius_lecuyer(),
                      out.radius_improved_dp()}));
  EXPECT_EQ(out.radius_cohen(), certify_cohen(b, kUnitNoise));
  EXPECT_EQ(out.radius_li(), certify_li(b, kUnitNoise));
  EXPECT_EQ(out.best_mechanism(), MechanismId::kCohen);
  EXPECT_FALSE(out.abstained());
}

TEST(CertifyEnsembleTest, AbstainsWhenEverythingIsZero) {
  const ExpectationBounds b =
      make_bounds(0.45, 0.5, ExpectationMode::kMultinomial);
  const CertificationOutcome out = certify_ensemble(
      b, kUnitNoise, EnsembleConfig::full(ExpectationMode::kMultinomial));
  EXPECT_TRUE(out.abstained());
  EXPECT_EQ(out.radius_ensemble(), 0.0);
}

TEST(CertifyEnsembleTest, RejectsModeMismatch) {
  const ExpectationBounds b = make_bounds(0.9, 0.05, ExpectationMode::kSoftmax);
  EXPECT_THROW(
      certify_ensemble(b, kUnitNoise,
                       EnsembleConfig::full(ExpectationMode::kMultinomial)),
      ValidationError);
}

TEST(CertifyEnsembleTest, SingletonEqualsMechanism) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const ExpectationBounds b =
        make_bounds(u(rng), u(rng), ExpectationMode::kMultinomial);
    for (MechanismId id : kAllMechanisms) {
      const CertificationOutcome out = certify_ensemble(
          b, kUnitNoise,
          EnsembleConfig::create(MechanismSet{id},
                                 ExpectationMode::kMultinomial));
      EXPECT_EQ(out.radius_ensemble(), certify(id, b, kUnitNoise));
    }
  }
}

TEST(CertifyEnsembleTest, DominatesAndGrowsWithMembers) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const double e0 = u(rng), e1 = u(rng);
    if (e1 > e0 || e0 + e1 > 1.0) continue;
    ++checked;
    const ExpectationBounds b =
        make_bounds(e0, e1, ExpectationMode::kMultinomial);
    const CertificationOutcome full = certify_ensemble(
        b, kUnitNoise, EnsembleConfig::full(ExpectationMode::kMultinomial));
    for (MechanismId id : kAllMechanisms) {
      EXPECT_GE(full.radius_ensemble(), full.radius(id));
    }
    // Growing the set one mechanism at a time never lowers the radius.
    MechanismSet set;
    double prev = 0.0;
    for (MechanismId id : kAllMechanisms) {
      set.insert(id);
      const double r = certify_ensemble(b, kUnitNoise,
                                        EnsembleConfig::create(
                                            set, ExpectationMode::kMultinomial))
                           .radius_ensemble();
      EXPECT_GE(r, prev);
      prev = r;
    }
  }
}

}  // namespace
}  // namespace simplexcert
