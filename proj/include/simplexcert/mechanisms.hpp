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

// Certified l2 radii from bounded expectations. Every mechanism is first
// evaluated at unit noise and unit sensitivity, then scaled by sigma / delta,
// which makes the radii exactly linear in sigma.

#ifndef SIMPLEXCERT_MECHANISMS_HPP_
#define SIMPLEXCERT_MECHANISMS_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "simplexcert/core.hpp"
#include "simplexcert/errors.hpp"
#include "simplexcert/normal.hpp"
#include "simplexcert/optimize.hpp"

namespace simplexcert {

// Search ranges and tolerances for the mechanisms that need an outer
// maximization.
class OptimizerSettings {
 public:
  OptimizerSettings() = default;

  static OptimizerSettings create(int grid_points, int refine_iters,
                                  double omega_max, double eps_min,
                                  double eps_cap, double bisect_tol) {
    if (grid_points < 2) throw ValidationError("grid_points must be >= 2");
    if (refine_iters < 1) throw ValidationError("refine_iters must be >= 1");
    if (!(omega_max > 1.0 + kOmegaOffsetMin)) {
      throw ValidationError("omega_max must exceed 1");
    }
    if (!(eps_min > 0.0)) throw ValidationError("eps_min must be > 0");
    if (!(eps_cap > eps_min))
      throw ValidationError("eps_cap must exceed eps_min");
    if (!(bisect_tol > 0.0 && bisect_tol < 1e-3)) {
      throw ValidationError("bisect_tol must lie in (0, 1e-3)");
    }
    OptimizerSettings s;
    s.grid_points_ = grid_points;
    s.refine_iters_ = refine_iters;
    s.omega_max_ = omega_max;
    s.eps_min_ = eps_min;
    s.eps_cap_ = eps_cap;
    s.bisect_tol_ = bisect_tol;
    return s;
  }

  int grid_points() const { return grid_points_; }
  int refine_iters() const { return refine_iters_; }
  double omega_max() const { return omega_max_; }
  double eps_min() const { return eps_min_; }
  double eps_cap() const { return eps_cap_; }
  double bisect_tol() const { return bisect_tol_; }

  OptimizerSettings with_grid_points(int points) const {
    return create(points, refine_iters_, omega_max_, eps_min_, eps_cap_,
                  bisect_tol_);
  }
  OptimizerSettings with_bisect_tol(double tol) const {
    return create(grid_points_, refine_iters_, omega_max_, eps_min_, eps_cap_,
                  tol);
  }

  // The Renyi order is searched over 1 + [kOmegaOffsetMin, omega_max - 1].
  static constexpr double kOmegaOffsetMin = 1e-6;

 private:
  int grid_points_ = 200;
  int refine_iters_ = 60;
  double omega_max_ = 500.0;
  double eps_min_ = 1e-4;
  double eps_cap_ = 50.0;
  double bisect_tol_ = 1e-9;
};

namespace internal {

inline void require_multinomial(const ExpectationBounds& b, const char* what) {
  if (b.mode() != ExpectationMode::kMultinomial) {
    throw ValidationError(std::string(what) +
                          " is only defined for multinomial expectations");
  }
}

// Renyi-divergence objective at order omega for unit sigma; 0 where the
// bound is undefined.
inline double li_objective(double omega, double e0, double e1) {
  const double s = 1.0 - omega;
  // ((e0^s + e1^s) / 2)^(1/s) = e1 * ((1 + (e0/e1)^s) / 2)^(1/s)
  const double x = s * (std::log(e0) - std::log(e1));
  const double log_mean = std::log(e1) + std::log1p(0.5 * std::expm1(x)) / s;
  const double m = (1.0 - e0 - e1) + 2.0 * std::exp(log_mean);
  if (!(m > 0.0 && m < 1.0)) return 0.0;
  return std::sqrt(-2.0 / omega * std::log(m));
}

// Differential-privacy objective of the classic Gaussian mechanism at
// privacy level eps for unit sigma and sensitivity.
inline double lecuyer_objective(double eps, double e0, double e1) {
  const double gap = e0 - std::exp(2.0 * eps) * e1;
  if (!(gap > 0.0)) return 0.0;
  const double arg = 1.25 * (1.0 + std::exp(eps)) / gap;
  return eps / std::sqrt(2.0 * std::log(arg));
}

// delta of the analytic Gaussian mechanism for normalized distance
// u = delta_sens * L / sigma.
inline double gaussian_delta(double u, double eps) {
  if (!(u > 0.0)) return 0.0;
  const double a = 0.5 * u;
  const double b = eps / u;
  return std::erfc(-(a - b) / std::numbers::sqrt2) * 0.5 -
         std::exp(eps) * std::erfc((a + b) / std::numbers::sqrt2) * 0.5;
}

// Largest u with gaussian_delta(u, eps) <= budget, to relative tolerance.
// Every value of `lo` has been checked against the constraint, so the
// result is feasible even where the delta curve is not monotone.
inline double largest_feasible_distance(double eps, double budget,
                                        double rel_tol) {
  if (!(budget > 0.0)) return 0.0;
  double lo;
  double hi;
  if (gaussian_delta(1.0, eps) <= budget) {
    lo = 1.0;
    hi = 2.0;
    while (gaussian_delta(hi, eps) <= budget) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return lo;
    }
  } else {
    hi = 1.0;
    lo = 0.5;
    while (gaussian_delta(lo, eps) > budget) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return 0.0;
    }
  }
  while (hi - lo > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_delta(mid, eps) <= budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

inline double improved_dp_budget(double e0, double e1, double eps) {
  return (e0 - e1 * std::exp(2.0 * eps)) / (1.0 + std::exp(eps));
}

}  // namespace internal

// sigma * Phi^{-1}(e0), gated on e0 > 0.5.
inline double certify_cohen(const ExpectationBounds& b,
                            const NoiseConfig& noise) {
  internal::require_multinomial(b, "Cohen certification");
  if (!(b.e0() > 0.5)) return 0.0;
  return std_normal_quantile(b.e0()) * noise.sigma();
}

inline double certify_li(const ExpectationBounds& b, const NoiseConfig& noise,
                         const OptimizerSettings& opt = {}) {
  internal::require_multinomial(b, "Li certification");
  if (!b.separated()) return 0.0;
  const double e0 = b.e0();
  const double e1 = b.e1();
  // Optimize over omega - 1 so the log grid can approach omega = 1.
  const ScalarMaximum best = maximize_log_grid(
      [&](double offset) {
        return internal::li_objective(1.0 + offset, e0, e1);
      },
      OptimizerSettings::kOmegaOffsetMin, opt.omega_max() - 1.0,
      opt.grid_points(), opt.refine_iters());
  return best.value * noise.sigma();
}

inline double certify_lecuyer(const ExpectationBounds& b,
                              const NoiseConfig& noise,
                              const OptimizerSettings& opt = {}) {
  if (!b.separated()) return 0.0;
  const double e0 = b.e0();
  const double e1 = b.e1();
  const ScalarMaximum best = maximize_log_grid(
      [&](double eps) { return internal::lecuyer_objective(eps, e0, e1); },
      opt.eps_min(), 1.0, opt.grid_points(), opt.refine_iters());
  return best.value * (noise.sigma() / noise.delta_sens());
}

// Smallest delta for which the Gaussian mechanism at distance L is
// (eps, delta)-differentially private.
inline double dp_delta_required(double radius, double eps,
                                const NoiseConfig& noise) {
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  if (!(radius > 0.0)) return 0.0;
  return internal::gaussian_delta(noise.delta_sens() * radius / noise.sigma(),
                                  eps);
}

// Largest delta compatible with the class-separation constraint at eps.
// Non-positive values mean eps is infeasible.
inline double dp_delta_budget(const ExpectationBounds& b, double eps) {
  if (!(eps >= 0.0)) throw ValidationError("eps must be >= 0");
  return internal::improved_dp_budget(b.e0(), b.e1(), eps);
}

// Upper end of the eps search: beyond ln(e0/e1)/2 the separation budget is
// negative.
inline double improved_dp_eps_max(const ExpectationBounds& b,
                                  const OptimizerSettings& opt) {
  if (b.e1() > 0.0) {
    return std::min(opt.eps_cap(), 0.5 * std::log(b.e0() / b.e1()));
  }
  return opt.eps_cap();
}

// Radius of the improved mechanism together with the privacy level that
// attains it.
struct DpCertificate {
  double radius = 0.0;
  double eps = 0.0;
  double delta = 0.0;
};

inline DpCertificate solve_improved_dp(const ExpectationBounds& b,
                                       const NoiseConfig& noise,
                                       const OptimizerSettings& opt = {}) {
  if (!b.separated()) return {};
  const double e0 = b.e0();
  const double e1 = b.e1();
  const double eps_max = improved_dp_eps_max(b, opt);
  if (!(eps_max >= opt.eps_min())) return {};
  const double tol = opt.bisect_tol();
  const ScalarMaximum best = maximize_log_grid(
      [&](double eps) {
        return internal::largest_feasible_distance(
            eps, internal::improved_dp_budget(e0, e1, eps), tol);
      },
      opt.eps_min(), eps_max, opt.grid_points(), opt.refine_iters());
  if (best.value == 0.0) return {};
  return {best.value * (noise.sigma() / noise.delta_sens()), best.argument,
          internal::improved_dp_budget(e0, e1, best.argument)};
}

inline double certify_improved_dp(const ExpectationBounds& b,
                                  const NoiseConfig& noise,
                                  const OptimizerSettings& opt = {}) {
  return solve_improved_dp(b, noise, opt).radius;
}

inline double certify(MechanismId id, const ExpectationBounds& b,
                      const NoiseConfig& noise,
                      const OptimizerSettings& opt = {}) {
  switch (id) {
    case MechanismId::kCohen:
      return certify_cohen(b, noise);
    case MechanismId::kLi:
      return certify_li(b, noise, opt);
    case MechanismId::kLecuyer:
      return certify_lecuyer(b, noise, opt);
    case MechanismId::kImprovedDp:
      return certify_improved_dp(b, noise, opt);
  }
  return 0.0;
}

// Whether a mechanism accepts expectations of the given kind.
inline bool supports(MechanismId id, ExpectationMode mode) {
  return mode == ExpectationMode::kMultinomial || id == MechanismId::kLecuyer ||
         id == MechanismId::kImprovedDp;
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_MECHANISMS_HPP_
