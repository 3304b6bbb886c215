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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "simplexcert/beta.hpp"
#include "simplexcert/normal.hpp"

namespace simplexcert {
namespace {

TEST(NormalCdfTest, KnownValues) {
  EXPECT_EQ(std_normal_cdf(0.0), 0.5);
  // Published table value Phi(1.959964) = 0.975000.
  EXPECT_NEAR(std_normal_cdf(1.959964), 0.975, 1e-6);
  EXPECT_NEAR(std_normal_cdf(1.0) - std_normal_cdf(-1.0), 0.6826894921370859,
              1e-12);
}

TEST(NormalCdfTest, SymmetryHolds) {
  for (double x = -8.0; x <= 8.0; x += 0.01) {
    EXPECT_NEAR(std_normal_cdf(-x), 1.0 - std_normal_cdf(x), 1e-12) << x;
  }
}

TEST(NormalQuantileTest, KnownValues) {
  EXPECT_EQ(std_normal_quantile(0.5), 0.0);
  EXPECT_NEAR(std_normal_quantile(0.975), 1.959964, 1e-5);
  const double tail = std_normal_quantile(1e-12);
  EXPECT_TRUE(std::isfinite(tail));
  EXPECT_LT(tail, -7.0);
  EXPECT_NEAR(std_normal_quantile(1.0 - 1e-12), -tail, 1e-3);
}

TEST(NormalQuantileTest, InvertsCdf) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-13.0, -1e-3);
  for (int i = 0; i < 2000; ++i) {
    const double p = std::pow(10.0, u(rng));
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)), p, 1e-9 * p + 1e-15);
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(1.0 - p)), 1.0 - p, 1e-9);
  }
  for (double p = 0.001; p < 1.0; p += 0.001) {
    EXPECT_NEAR(std_normal_cdf(std_normal_quantile(p)), p, 1e-12);
  }
}

TEST(NormalQuantileTest, MatchesLongDoubleBisection) {
  for (double p : {0.5000001, 0.6, 0.9, 0.99, 0.999, 0.999999, 1.0 - 1e-10}) {
    EXPECT_NEAR(std_normal_quantile(p),
                static_cast<double>(oracle::cohen_value(p)), 1e-9)
        << p;
  }
}

TEST(NormalQuantileTest, RejectsClosedEndpoints) {
  EXPECT_THROW(std_normal_quantile(0.0), ValidationError);
  EXPECT_THROW(std_normal_quantile(1.0), ValidationError);
  EXPECT_THROW(std_normal_quantile(std::nan("")), ValidationError);
}

TEST(IncompleteBetaTest, MatchesBinomialTail) {
  // I_p(k, n - k + 1) = P(Binomial(n, p) >= k).
  struct Case {
    long k, n;
    double p;
  };
  for (const Case& c :
       {Case{3, 10, 0.2}, Case{50, 100, 0.5}, Case{99000, 100000, 0.989},
        Case{1, 5, 0.01}, Case{600, 100000, 0.0065}}) {
    const double expected =
        static_cast<double>(oracle::binomial_upper_tail(c.k, c.n, c.p));
    EXPECT_NEAR(regularized_incomplete_beta(c.p, c.k, c.n - c.k + 1), expected,
                1e-10 * std::max(expected, 1e-3))
        << c.k << "/" << c.n;
  }
}

TEST(IncompleteBetaTest, Endpoints) {
  EXPECT_EQ(regularized_incomplete_beta(0.0, 2.0, 3.0), 0.0);
  EXPECT_EQ(regularized_incomplete_beta(1.0, 2.0, 3.0), 1.0);
  EXPECT_THROW(regularized_incomplete_beta(0.5, 0.0, 3.0), ValidationError);
  EXPECT_THROW(regularized_incomplete_beta(1.5, 1.0, 3.0), ValidationError);
}

TEST(BetaQuantileTest, InvertsIncompleteBeta) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shape(0.5, 5000.0);
  std::uniform_real_distribution<double> prob(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 300; ++i) {
    const double a = shape(rng), b = shape(rng), p = prob(rng);
    const double x = beta_quantile(p, a, b);
    EXPECT_NEAR(regularized_incomplete_beta(x, a, b), p, 1e-8)
        << a << " " << b << " " << p;
  }
}

}  // namespace
}  // namespace simplexcert
