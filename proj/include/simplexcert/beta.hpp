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

// Regularized incomplete Beta function and its inverse. Both are written
// against std::lgamma only so their accuracy does not hinge on any special
// function library.

#ifndef SIMPLEXCERT_BETA_HPP_
#define SIMPLEXCERT_BETA_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "simplexcert/errors.hpp"

namespace simplexcert {
namespace internal {

inline constexpr int kBetaMaxIterations = 200000;

// Continued fraction for I_x(a, b) by the modified Lentz method. Converges
// quickly for x < (a + 1) / (a + b + 2).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "incomplete beta continued fraction did not converge "
                "(a=%.17g, b=%.17g, x=%.17g)",
                a, b, x);
  throw NumericError(buf);
}

// Remainder of Stirling's series for lgamma, accurate to ~1e-16 for x >= 15.
inline double stirling_correction(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  return inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

// log B(a, b). For large shapes the leading Stirling terms are combined
// before evaluation so the huge lgamma values never cancel.
inline double log_beta(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b < 15.0) return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
  const double sum = a + b;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (b - 0.5) * std::log(b) -
         b * std::log(sum) - (a - 0.5) * std::log1p(b / a) +
         stirling_correction(a) + stirling_correction(b) -
         stirling_correction(sum);
}

}  // namespace internal

// I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ValidationError("incomplete beta requires a, b > 0");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw ValidationError("incomplete beta requires x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      a * std::log(x) + b * std::log1p(-x) - internal::log_beta(a, b);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * internal::beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * internal::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Density of Beta(a, b) at x in (0, 1).
inline double beta_pdf(double x, double a, double b) {
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  internal::log_beta(a, b));
}

namespace internal {

// Solves I_x(a, b) = p for p <= 0.5 by Newton steps kept inside a shrinking
// bisection bracket.
inline double beta_quantile_lower(double p, double a, double b,
                                  double rel_tol) {
  double lo = 0.0;
  double hi = 1.0;
  double x = a / (a + b);
  constexpr int kMaxSteps = 2000;
  for (int step = 0; step < kMaxSteps; ++step) {
    const double f = regularized_incomplete_beta(x, a, b) - p;
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    // Tolerance is relative to the distance from the nearer endpoint so
    // that 1 - x keeps its relative accuracy as well.
    const double scale =
        std::max(std::min(lo, 1.0 - hi), std::numeric_limits<double>::min());
    if (hi - lo <= rel_tol * scale || std::nextafter(lo, 2.0) >= hi) {
      return 0.5 * (lo + hi);
    }
    double next = x;
    const double density = beta_pdf(x, a, b);
    if (density > 0.0 && std::isfinite(density)) next = x - f / density;
    if (!(next > lo && next < hi)) {
      // Bisect geometrically when the bracket spans many orders of
      // magnitude, so tiny quantiles are reached in few steps.
      next = (lo > 0.0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
      if (lo == 0.0) next = 0.5 * hi;
    }
    if (std::fabs(next - x) <= rel_tol * std::min(next, 1.0 - next)) {
      return next;
    }
    x = next;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "beta quantile did not converge (p=%.17g, a=%.17g, b=%.17g, "
                "bracket=[%.17g, %.17g])",
                p, a, b, lo, hi);
  throw NumericError(buf);
}

}  // namespace internal

// Inverse of x -> I_x(a, b). The upper half is solved through the symmetry
// 1 - I_x(a, b) = I_{1-x}(b, a) so both tails keep relative accuracy.
inline double beta_quantile(double p, double a, double b,
                            double rel_tol = 1e-10) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ValidationError("beta quantile requires a, b > 0");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("beta quantile requires p in [0, 1]");
  }
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (p <= 0.5) return internal::beta_quantile_lower(p, a, b, rel_tol);
  return 1.0 - internal::beta_quantile_lower(1.0 - p, b, a, rel_tol);
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_BETA_HPP_
