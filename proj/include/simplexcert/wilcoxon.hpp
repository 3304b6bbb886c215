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

// Wilcoxon signed-rank test for paired samples with Pratt's handling of
// zero differences.

#ifndef SIMPLEXCERT_WILCOXON_HPP_
#define SIMPLEXCERT_WILCOXON_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "simplexcert/errors.hpp"
#include "simplexcert/normal.hpp"

namespace simplexcert {

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double p_value = 1.0;    // two-sided
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t nonzero = 0;
  bool exact = true;
};

// Exact null distribution is used up to this many nonzero differences.
inline constexpr std::size_t kWilcoxonExactMax = 25;

namespace internal {

// Midranks of |d| over all differences, zeros included.
inline std::vector<double> pratt_ranks(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::fabs(d[a]) < std::fabs(d[b]);
                   });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(d[order[j + 1]]) == std::fabs(d[order[i]]))
      ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
    i = j + 1;
  }
  return ranks;
}

// P(W+ <= t) under random signs, with ranks given doubled so they are
// integers.
inline double signed_rank_lower_tail(std::span<const std::int64_t> doubled,
                                     std::int64_t t) {
  const std::int64_t total =
      std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  std::int64_t reach = 0;
  for (std::int64_t r : doubled) {
    for (std::int64_t s = reach; s >= 0; --s) {
      if (ways[s] != 0.0) ways[s + r] += ways[s];
    }
    reach += r;
  }
  double below = 0.0;
  for (std::int64_t s = 0; s <= std::min(t, total); ++s) below += ways[s];
  return std::ldexp(below, -static_cast<int>(doubled.size()));
}

}  // namespace internal

// Two-sided test of the differences x[i] - y[i].
inline WilcoxonResult wilcoxon_pratt(std::span<const double> x,
                                     std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ValidationError("paired samples must have equal length");
  }
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    d[i] = x[i] - y[i];
    if (!std::isfinite(d[i]))
      throw ValidationError("differences must be finite");
  }
  const std::vector<double> ranks = internal::pratt_ranks(d);

  WilcoxonResult result;
  std::vector<std::int64_t> doubled;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0.0) continue;
    (d[i] > 0.0 ? result.w_plus : result.w_minus) += ranks[i];
    doubled.push_back(std::llround(2.0 * ranks[i]));
    sum_sq += ranks[i] * ranks[i];
  }
  result.nonzero = doubled.size();
  result.statistic = std::min(result.w_plus, result.w_minus);
  if (doubled.empty()) return result;

  const std::int64_t span =
      std::accumulate(doubled.begin(), doubled.end(), std::int64_t{0});
  if (doubled.size() <= kWilcoxonExactMax && span <= (std::int64_t{1} << 24)) {
    result.exact = true;
    const double tail = internal::signed_rank_lower_tail(
        doubled, std::llround(2.0 * result.statistic));
    result.p_value = std::min(1.0, 2.0 * tail);
  } else {
    result.exact = false;
    const double mean = 0.5 * (result.w_plus + result.w_minus);
    const double sd = 0.5 * std::sqrt(sum_sq);
    const double z = (result.statistic - mean) / sd;
    result.p_value = std::min(1.0, 2.0 * std_normal_cdf(z));
  }
  return result;
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_WILCOXON_HPP_
