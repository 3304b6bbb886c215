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

#include "simplexcert/confidence.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace simplexcert {
namespace {

// sqrt(ln(2000) / 200000) evaluated with 30-digit arithmetic.
constexpr double kHalfwidth = 0.00616477998777818605513767695885;

TEST(HoeffdingTest, MatchesHighPrecisionValue) {
  EXPECT_NEAR(hoeffding_halfwidth(100000, 0.001), kHalfwidth, 1e-15);
}

TEST(HoeffdingTest, ScalesAsInverseSqrtN) {
  for (std::int64_t n : {1, 7, 1000, 123456}) {
    for (double alpha : {0.5, 0.01, 1e-6}) {
      EXPECT_EQ(hoeffding_halfwidth(4 * n, alpha),
                0.5 * hoeffding_halfwidth(n, alpha));
    }
  }
}

TEST(HoeffdingTest, RejectsBadArguments) {
  EXPECT_THROW(hoeffding_halfwidth(100, 2.0), ValidationError);
  EXPECT_THROW(hoeffding_halfwidth(100, 0.0), ValidationError);
  EXPECT_THROW(hoeffding_halfwidth(0, 0.1), ValidationError);
}

TEST(BetaIntervalTest, BoundaryConventions) {
  EXPECT_EQ(beta_interval(0, 100, 0.01, BoundSide::kLower), 0.0);
  EXPECT_EQ(beta_interval(100, 100, 0.01, BoundSide::kUpper), 1.0);
  EXPECT_THROW(beta_interval(101, 100, 0.01, BoundSide::kLower),
               ValidationError);
  EXPECT_THROW(beta_interval(1, 100, 1.0, BoundSide::kLower), ValidationError);
}

TEST(BetaIntervalTest, MatchesBinomialTailBisection) {
  const double lower = beta_interval(99000, 100000, 0.00025, BoundSide::kLower);
  EXPECT_GT(lower, 0.988);
  EXPECT_LT(lower, 0.990);
  EXPECT_NEAR(lower,
              static_cast<double>(
                  oracle::clopper_pearson_lower(99000, 100000, 0.00025L)),
              1e-9);
  struct Case {
    std::int64_t k, n;
    double a;
  };
  for (const Case& c :
       {Case{0, 10, 0.05}, Case{3, 10, 0.05}, Case{50, 100, 0.0005},
        Case{600, 100000, 0.0005}, Case{1, 1, 0.1}, Case{999, 1000, 0.001}}) {
    if (c.k > 0) {
      EXPECT_NEAR(
          beta_interval(c.k, c.n, c.a, BoundSide::kLower),
          static_cast<double>(oracle::clopper_pearson_lower(c.k, c.n, c.a)),
          1e-9)
          << c.k << "/" << c.n;
    }
    if (c.k < c.n) {
      EXPECT_NEAR(
          beta_interval(c.k, c.n, c.a, BoundSide::kUpper),
          static_cast<double>(oracle::clopper_pearson_upper(c.k, c.n, c.a)),
          1e-9)
          << c.k << "/" << c.n;
    }
  }
}

TEST(BoundMultinomialTest, DegenerateCountsStayInterior) {
  const ExpectationBounds b =
      bound_multinomial(RawCounts::create({1000, 0, 0}), 0.001);
  EXPECT_LT(b.e0(), 1.0);
  EXPECT_GT(b.e1(), 0.0);
  EXPECT_EQ(b.predicted_class(), 0);
  EXPECT_EQ(b.mode(), ExpectationMode::kMultinomial);
  EXPECT_EQ(b.n(), 1000);
}

TEST(BoundMultinomialTest, SymmetricCountsCross) {
  const ExpectationBounds b =
      bound_multinomial(RawCounts::create({50, 50}), 0.001);
  EXPECT_LT(b.e0(), b.e1());
  // Beta quantiles at alpha / 2 for 50 of 100.
  EXPECT_NEAR(b.e0(), 0.3355819371905234, 1e-9);
  EXPECT_NEAR(b.e1(), 0.664418062809478, 1e-9);
}

TEST(BoundMultinomialTest, UsesBonferroniSplitOnTopTwo) {
  const ExpectationBounds b =
      bound_multinomial(RawCounts::create({400, 99000, 600, 0}), 0.001);
  EXPECT_EQ(b.predicted_class(), 1);
  EXPECT_GT(b.e0(), 0.988);
  EXPECT_LT(b.e0(), 0.990);
  EXPECT_NEAR(b.e0(),
              static_cast<double>(
                  oracle::clopper_pearson_lower(99000, 100000, 0.0005L)),
              1e-9);
  EXPECT_NEAR(
      b.e1(),
      static_cast<double>(oracle::clopper_pearson_upper(600, 100000, 0.0005L)),
      1e-9);
}

TEST(BoundMultinomialTest, TiesGoToLowestIndex) {
  const ExpectationBounds b =
      bound_multinomial(RawCounts::create({10, 40, 40, 10}), 0.01);
  EXPECT_EQ(b.predicted_class(), 1);
}

TEST(BoundMultinomialTest, RejectsInconsistentCounts) {
  EXPECT_THROW(RawCounts::create({1, 2}, 4), ValidationError);
  EXPECT_THROW(RawCounts::create({0, 0}), ValidationError);
  EXPECT_THROW(RawCounts::create({-1, 3}), ValidationError);
}

TEST(BoundMultinomialTest, SmallerAlphaWidensBounds) {
  const RawCounts raw = RawCounts::create({700, 250, 50});
  double prev_e0 = 1.0, prev_e1 = 0.0;
  for (double alpha : {0.5, 0.1, 0.01, 1e-3, 1e-5, 1e-8}) {
    const ExpectationBounds b = bound_multinomial(raw, alpha);
    EXPECT_LE(b.e0(), prev_e0);
    EXPECT_GE(b.e1(), prev_e1);
    prev_e0 = b.e0();
    prev_e1 = b.e1();
  }
}

TEST(BoundMultinomialTest, BoundsAreStrictlyInterior) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> count(0, 50);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::int64_t> counts(1 + i % 5);
    for (auto& c : counts) c = count(rng);
    counts[0] += 1;
    const ExpectationBounds b =
        bound_multinomial(RawCounts::create(counts), 0.01);
    EXPECT_GT(b.e0(), 0.0);
    EXPECT_LT(b.e0(), 1.0);
    EXPECT_GT(b.e1(), 0.0);
    EXPECT_LT(b.e1(), 1.0);
  }
}

// Coverage of the joint event {e0 <= p_(0), e1 >= p_(1)} over repeated
// multinomial experiments.
TEST(BoundMultinomialTest, SimulatedCoverageMeetsNominal) {
  const std::vector<double> p = {0.6, 0.3, 0.1};
  const double alpha = 0.05;
  const int replicates = 10000;
  std::mt19937_64 rng(2024);
  int covered = 0;
  for (int r = 0; r < replicates; ++r) {
    std::vector<std::int64_t> counts(3);
    std::int64_t remaining = 1000;
    double mass = 1.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
      std::binomial_distribution<std::int64_t> draw(remaining, p[k] / mass);
      counts[k] = draw(rng);
      remaining -= counts[k];
      mass -= p[k];
    }
    counts.back() = remaining;
    const ExpectationBounds b =
        bound_multinomial(RawCounts::create(counts), alpha);
    if (b.e0() <= p[0] && b.e1() >= p[1]) ++covered;
  }
  EXPECT_GE(static_cast<double>(covered) / replicates, 1.0 - alpha);
}

TEST(BoundSoftmaxTest, SubtractsAndAddsHalfwidth) {
  const ExpectationBounds b = bound_softmax(
      SoftmaxSums::create({80000.0, 15000.0, 5000.0}, 100000), 0.001);
  EXPECT_NEAR(b.e0(), 0.8 - kHalfwidth, 1e-12);
  EXPECT_NEAR(b.e1(), 0.15 + kHalfwidth, 1e-12);
  EXPECT_NEAR(b.e0(), 0.793835220012221858, 1e-12);
  EXPECT_NEAR(b.e1(), 0.156164779987778181, 1e-12);
  EXPECT_EQ(b.mode(), ExpectationMode::kSoftmax);
  EXPECT_EQ(b.predicted_class(), 0);
}

TEST(BoundSoftmaxTest, SymmetricMeansCross) {
  const ExpectationBounds b =
      bound_softmax(SoftmaxSums::create({500.0, 500.0}, 1000), 0.001);
  EXPECT_LT(b.e0(), b.e1());
  EXPECT_EQ(b.predicted_class(), 0);
}

TEST(BoundSoftmaxTest, ConvergesToMeansAsNGrows) {
  double prev = 1.0;
  for (std::int64_t n : {100, 10000, 1000000, 100000000}) {
    const double dn = static_cast<double>(n);
    const ExpectationBounds b = bound_softmax(
        SoftmaxSums::create({0.7 * dn, 0.2 * dn, 0.1 * dn}, n), 0.001);
    const double gap = std::fabs(b.e0() - 0.7) + std::fabs(b.e1() - 0.2);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(BoundSoftmaxTest, ExtremeMeansStayInsideUnitInterval) {
  const ExpectationBounds b =
      bound_softmax(SoftmaxSums::create({10.0, 0.0}, 10), 0.001);
  EXPECT_GT(b.e0(), 0.0);
  EXPECT_LT(b.e1(), 1.0);
  EXPECT_GT(b.e1(), 0.0);
  EXPECT_LT(b.e0(), 1.0);
}

TEST(SoftmaxSumsTest, ValidatesMass) {
  EXPECT_THROW(SoftmaxSums::create({0.5, 0.4}, 1), ValidationError);
  EXPECT_THROW(SoftmaxSums::create({1.0}, 0), ValidationError);
  EXPECT_THROW(SoftmaxSums::create({-0.1, 1.1}, 1), ValidationError);
}

}  // namespace
}  // namespace simplexcert
