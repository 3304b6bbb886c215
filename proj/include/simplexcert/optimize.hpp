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

#ifndef SIMPLEXCERT_OPTIMIZE_HPP_
#define SIMPLEXCERT_OPTIMIZE_HPP_

#include <algorithm>
#include <cmath>
#include <vector>

namespace simplexcert {

struct ScalarMaximum {
  double argument = 0.0;
  double value = 0.0;
};

// Maximizes `objective` over [lo, hi] (lo > 0): evaluates a log-spaced grid
// of `grid_points`, then runs `refine_iters` golden-section steps (in log
// space) on the two grid cells around the best grid point. The returned
// value is the largest objective value actually evaluated, so refinement
// can only improve on the grid.
template <typename Objective>
ScalarMaximum maximize_log_grid(Objective&& objective, double lo, double hi,
                                int grid_points, int refine_iters) {
  ScalarMaximum best;
  if (!(lo > 0.0) || !(hi >= lo)) return best;
  auto consider = [&](double arg) {
    const double value = objective(arg);
    if (value > best.value) {
      best.argument = arg;
      best.value = value;
    }
    return value;
  };
  if (hi == lo || grid_points < 2) {
    consider(hi);
    return best;
  }
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  const double step = (log_hi - log_lo) / (grid_points - 1);
  auto grid_at = [&](int k) {
    if (k == 0) return lo;
    if (k == grid_points - 1) return hi;
    return std::exp(log_lo + step * k);
  };
  int best_index = -1;
  double best_grid_value = 0.0;
  for (int k = 0; k < grid_points; ++k) {
    const double value = consider(grid_at(k));
    if (value > best_grid_value) {
      best_grid_value = value;
      best_index = k;
    }
  }
  if (best_index < 0) return best;

  // Golden section on s = log(argument).
  double a = std::log(grid_at(std::max(best_index - 1, 0)));
  double b = std::log(grid_at(std::min(best_index + 1, grid_points - 1)));
  constexpr double kInvPhi = 0.6180339887498948482;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = consider(std::exp(c));
  double fd = consider(std::exp(d));
  for (int it = 0; it < refine_iters; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = consider(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = consider(std::exp(d));
    }
  }
  return best;
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_OPTIMIZE_HPP_
