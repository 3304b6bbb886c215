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

// Turns Monte-Carlo evidence (class counts or summed softmax scores) into
// worst-case expectation bounds.

#ifndef SIMPLEXCERT_CONFIDENCE_HPP_
#define SIMPLEXCERT_CONFIDENCE_HPP_

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplexcert/beta.hpp"
#include "simplexcert/core.hpp"
#include "simplexcert/errors.hpp"

namespace simplexcert {

// Per-class counts of the noisy argmax over n draws.
class RawCounts {
 public:
  static RawCounts create(std::vector<std::int64_t> counts) {
    if (counts.empty()) throw ValidationError("counts must not be empty");
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
      if (c < 0) throw ValidationError("counts must be non-negative");
      total += c;
    }
    if (total < 1) throw ValidationError("counts must sum to n >= 1");
    return RawCounts(std::move(counts), total);
  }

  // As above, additionally checking the declared total.
  static RawCounts create(std::vector<std::int64_t> counts, std::int64_t n) {
    RawCounts raw = create(std::move(counts));
    if (raw.n() != n) {
      throw ValidationError("counts sum to " + std::to_string(raw.n()) +
                            " but n = " + std::to_string(n));
    }
    return raw;
  }

  std::span<const std::int64_t> counts() const { return counts_; }
  std::int64_t n() const { return n_; }
  std::size_t num_classes() const { return counts_.size(); }

  friend bool operator==(const RawCounts&, const RawCounts&) = default;

 private:
  RawCounts(std::vector<std::int64_t> counts, std::int64_t n)
      : counts_(std::move(counts)), n_(n) {}
  std::vector<std::int64_t> counts_;
  std::int64_t n_;
};

// Per-class sums of softmax scores over n draws.
class SoftmaxSums {
 public:
  static SoftmaxSums create(std::vector<double> sums, std::int64_t n) {
    if (n < 1) throw ValidationError("softmax sums require n >= 1");
    if (sums.empty()) throw ValidationError("softmax sums must not be empty");
    const double dn = static_cast<double>(n);
    double total = 0.0;
    for (double s : sums) {
      if (!std::isfinite(s) || s < 0.0 || s / dn > 1.0 + 1e-9) {
        throw ValidationError("each softmax mean must lie in [0, 1]");
      }
      total += s / dn;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
      throw ValidationError("softmax means must sum to 1 (got " +
                            std::to_string(total) + ")");
    }
    return SoftmaxSums(std::move(sums), n);
  }

  std::span<const double> sums() const { return sums_; }
  std::int64_t n() const { return n_; }
  std::size_t num_classes() const { return sums_.size(); }
  double mean(std::size_t k) const {
    return sums_[k] / static_cast<double>(n_);
  }

  friend bool operator==(const SoftmaxSums&, const SoftmaxSums&) = default;

 private:
  SoftmaxSums(std::vector<double> sums, std::int64_t n)
      : sums_(std::move(sums)), n_(n) {}
  std::vector<double> sums_;
  std::int64_t n_;
};

enum class BoundSide { kLower, kUpper };

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
}

// Half-width of the two-sided Hoeffding interval for a mean of n draws in
// [0, 1] at confidence 1 - alpha.
inline double hoeffding_halfwidth(std::int64_t n, double alpha) {
  if (n < 1) throw ValidationError("Hoeffding bound requires n >= 1");
  check_alpha(alpha);
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

// One-sided Clopper-Pearson bound on a binomial proportion with coverage at
// least 1 - alpha_side.
inline double beta_interval(std::int64_t successes, std::int64_t n,
                            double alpha_side, BoundSide side) {
  if (n < 1 || successes < 0 || successes > n) {
    throw ValidationError("beta interval requires 0 <= successes <= n, n >= 1");
  }
  check_alpha(alpha_side);
  const double k = static_cast<double>(successes);
  const double dn = static_cast<double>(n);
  if (side == BoundSide::kLower) {
    if (successes == 0) return 0.0;
    return beta_quantile(alpha_side, k, dn - k + 1.0);
  }
  if (successes == n) return 1.0;
  return beta_quantile(1.0 - alpha_side, k + 1.0, dn - k);
}

namespace internal {

// Indices of the largest and second-largest entries, ties to the lowest
// index. The runner-up is -1 for a single class.
template <typename T>
std::pair<int, int> top_two(std::span<const T> values) {
  int top = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[top]) top = static_cast<int>(k);
  }
  int runner = -1;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (static_cast<int>(k) == top) continue;
    if (runner < 0 || values[k] > values[runner]) runner = static_cast<int>(k);
  }
  return {top, runner};
}

}  // namespace internal

// Clopper-Pearson bounds on the top two classes with a Bonferroni split of
// alpha across the pair.
inline ExpectationBounds bound_multinomial(const RawCounts& raw, double alpha) {
  check_alpha(alpha);
  const auto [top, runner] = internal::top_two(raw.counts());
  const std::int64_t top_count = raw.counts()[top];
  const std::int64_t runner_count = runner < 0 ? 0 : raw.counts()[runner];
  const double e0 =
      beta_interval(top_count, raw.n(), alpha / 2.0, BoundSide::kLower);
  const double e1 =
      beta_interval(runner_count, raw.n(), alpha / 2.0, BoundSide::kUpper);
  return ExpectationBounds::create(e0, e1, ExpectationMode::kMultinomial,
                                   raw.n(), alpha, top);
}

// Hoeffding bounds on the top two mean softmax scores.
inline ExpectationBounds bound_softmax(const SoftmaxSums& sums, double alpha) {
  const double halfwidth = hoeffding_halfwidth(sums.n(), alpha);
  const auto [top, runner] = internal::top_two(sums.sums());
  const double top_mean = sums.mean(static_cast<std::size_t>(top));
  const double runner_mean =
      runner < 0 ? 0.0 : sums.mean(static_cast<std::size_t>(runner));
  const double e0 = clamp_expectation(top_mean - halfwidth);
  const double e1 = clamp_expectation(runner_mean + halfwidth);
  return ExpectationBounds::create(e0, e1, ExpectationMode::kSoftmax, sums.n(),
                                   alpha, top);
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_CONFIDENCE_HPP_
