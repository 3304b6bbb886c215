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

// Monte-Carlo randomized smoothing against analytic classifiers whose
// smoothed output is known in closed form.

#ifndef SIMPLEXCERT_SIMULATE_HPP_
#define SIMPLEXCERT_SIMULATE_HPP_

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplexcert/confidence.hpp"
#include "simplexcert/core.hpp"
#include "simplexcert/ensemble.hpp"
#include "simplexcert/errors.hpp"
#include "simplexcert/mechanisms.hpp"
#include "simplexcert/normal.hpp"
#include "simplexcert/philox.hpp"

namespace simplexcert {

// Stand-in for a trained network.
//
// kFixedDistribution: the noisy argmax is a categorical draw from `p`, and
// the softmax output is `p` itself for every draw.
// kLinearTwoClass: class 0 iff w.x + b >= 0. Its softmax output is
// (s, 1 - s) with s = logistic((w.x + b) / |w|).
class SyntheticClassifier {
 public:
  enum class Kind { kFixedDistribution, kLinearTwoClass };

  static SyntheticClassifier fixed(std::vector<double> p) {
    if (p.empty()) throw ValidationError("distribution must not be empty");
    double total = 0.0;
    for (double v : p) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("distribution entries must be >= 0");
      }
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
      throw ValidationError("distribution must sum to 1");
    }
    SyntheticClassifier c(Kind::kFixedDistribution);
    c.probabilities_ = std::move(p);
    return c;
  }

  static SyntheticClassifier linear(std::vector<double> w, double b) {
    double norm2 = 0.0;
    for (double v : w) {
      if (!std::isfinite(v)) throw ValidationError("weights must be finite");
      norm2 += v * v;
    }
    if (!(norm2 > 0.0)) throw ValidationError("weight vector must be nonzero");
    if (!std::isfinite(b)) throw ValidationError("offset must be finite");
    SyntheticClassifier c(Kind::kLinearTwoClass);
    c.weights_ = std::move(w);
    c.offset_ = b;
    c.weight_norm_ = std::sqrt(norm2);
    return c;
  }

  Kind kind() const { return kind_; }
  std::size_t num_classes() const {
    return kind_ == Kind::kFixedDistribution ? probabilities_.size() : 2;
  }
  std::span<const double> probabilities() const { return probabilities_; }
  std::span<const double> weights() const { return weights_; }
  double offset() const { return offset_; }
  double weight_norm() const { return weight_norm_; }

  // Signed distance of x to the decision boundary (linear kind only).
  double signed_distance(std::span<const double> x) const {
    if (x.size() != weights_.size()) {
      throw ValidationError("input dimension " + std::to_string(x.size()) +
                            " does not match weight dimension " +
                            std::to_string(weights_.size()));
    }
    return (std::inner_product(x.begin(), x.end(), weights_.begin(), 0.0) +
            offset_) /
           weight_norm_;
  }

 private:
  explicit SyntheticClassifier(Kind kind) : kind_(kind) {}
  Kind kind_;
  std::vector<double> probabilities_;
  std::vector<double> weights_;
  double offset_ = 0.0;
  double weight_norm_ = 0.0;
};

// Parameters of one randomized-smoothing run.
class SimulationRun {
 public:
  static SimulationRun create(std::uint64_t seed, std::int64_t n,
                              std::int64_t n0, double sigma, double alpha) {
    if (n < 1) throw ValidationError("n must be >= 1");
    if (n0 < 1) throw ValidationError("n0 must be >= 1");
    check_alpha(alpha);
    return SimulationRun(seed, n, n0, NoiseConfig::create(sigma), alpha);
  }

  std::uint64_t seed() const { return seed_; }
  std::int64_t n() const { return n_; }
  std::int64_t n0() const { return n0_; }
  double sigma() const { return noise_.sigma(); }
  const NoiseConfig& noise() const { return noise_; }
  double alpha() const { return alpha_; }

  SimulationRun with_seed(std::uint64_t seed) const {
    return SimulationRun(seed, n_, n0_, noise_, alpha_);
  }
  SimulationRun with_n(std::int64_t n) const {
    return create(seed_, n, n0_, noise_.sigma(), alpha_);
  }

 private:
  SimulationRun(std::uint64_t seed, std::int64_t n, std::int64_t n0,
                NoiseConfig noise, double alpha)
      : seed_(seed), n_(n), n0_(n0), noise_(noise), alpha_(alpha) {}
  std::uint64_t seed_;
  std::int64_t n_;
  std::int64_t n0_;
  NoiseConfig noise_;
  double alpha_;
};

// Phase ids of the generator streams; see philox.hpp.
enum class DrawPhase : std::uint32_t {
  kCertify = 0,
  kSelect = 1,
  kEstimate = 2
};

// Exact smoothed class probabilities.
inline std::vector<double> smoothed_truth(const SyntheticClassifier& c,
                                          std::span<const double> x,
                                          double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
  if (c.kind() == SyntheticClassifier::Kind::kFixedDistribution) {
    return {c.probabilities().begin(), c.probabilities().end()};
  }
  const double margin = c.signed_distance(x) / sigma;
  return {std_normal_cdf(margin), std_normal_cdf(-margin)};
}

namespace internal {

inline RawCounts draw_counts(const SyntheticClassifier& c,
                             std::span<const double> x, std::int64_t n,
                             double sigma, Philox4x32& rng) {
  std::vector<std::int64_t> counts(c.num_classes(), 0);
  if (c.kind() == SyntheticClassifier::Kind::kFixedDistribution) {
    const auto p = c.probabilities();
    std::vector<double> cumulative(p.size());
    std::partial_sum(p.begin(), p.end(), cumulative.begin());
    for (std::int64_t i = 0; i < n; ++i) {
      const double u = rng.uniform() * cumulative.back();
      std::size_t k = 0;
      while (k + 1 < cumulative.size() && !(u < cumulative[k])) ++k;
      while (p[k] == 0.0 && k > 0) --k;
      ++counts[k];
    }
  } else {
    c.signed_distance(x);  // validates the dimension
    const auto w = c.weights();
    std::normal_distribution<double> noise(0.0, sigma);
    for (std::int64_t i = 0; i < n; ++i) {
      double score = c.offset();
      for (std::size_t d = 0; d < w.size(); ++d) {
        score += w[d] * (x[d] + noise(rng));
      }
      ++counts[score >= 0.0 ? 0 : 1];
    }
  }
  return RawCounts::create(std::move(counts));
}

}  // namespace internal

// n draws of the noisy argmax. Deterministic in (seed, sample_index).
inline RawCounts count_draws(const SyntheticClassifier& c,
                             std::span<const double> x,
                             const SimulationRun& run,
                             std::uint32_t sample_index = 0) {
  Philox4x32 rng(run.seed(), sample_index,
                 static_cast<std::uint32_t>(DrawPhase::kCertify));
  return internal::draw_counts(c, x, run.n(), run.sigma(), rng);
}

// Summed softmax outputs over n noisy draws.
inline SoftmaxSums softmax_sums(const SyntheticClassifier& c,
                                std::span<const double> x,
                                const SimulationRun& run,
                                std::uint32_t sample_index = 0) {
  const double dn = static_cast<double>(run.n());
  if (c.kind() == SyntheticClassifier::Kind::kFixedDistribution) {
    // The output does not depend on the noise.
    std::vector<double> sums;
    for (double p : c.probabilities()) sums.push_back(p * dn);
    return SoftmaxSums::create(std::move(sums), run.n());
  }
  c.signed_distance(x);
  Philox4x32 rng(run.seed(), sample_index,
                 static_cast<std::uint32_t>(DrawPhase::kCertify));
  std::normal_distribution<double> noise(0.0, run.sigma());
  const auto w = c.weights();
  double first = 0.0;
  for (std::int64_t i = 0; i < run.n(); ++i) {
    double score = c.offset();
    for (std::size_t d = 0; d < w.size(); ++d) {
      score += w[d] * (x[d] + noise(rng));
    }
    first += 1.0 / (1.0 + std::exp(-score / c.weight_norm()));
  }
  return SoftmaxSums::create({first, dn - first}, run.n());
}

// One sample drawn once and reused for class selection and certification.
inline CertificationOutcome multinomial_certify(
    const SyntheticClassifier& c, std::span<const double> x,
    const SimulationRun& run, const EnsembleConfig& cfg,
    std::uint32_t sample_index = 0, const OptimizerSettings& opt = {}) {
  if (cfg.mode() != ExpectationMode::kMultinomial) {
    throw ValidationError(
        "multinomial certification needs a multinomial "
        "ensemble configuration");
  }
  const ExpectationBounds bounds =
      bound_multinomial(count_draws(c, x, run, sample_index), run.alpha());
  return certify_ensemble(bounds, run.noise(), cfg, opt);
}

inline CertificationOutcome softmax_certify(const SyntheticClassifier& c,
                                            std::span<const double> x,
                                            const SimulationRun& run,
                                            const EnsembleConfig& cfg,
                                            std::uint32_t sample_index = 0,
                                            const OptimizerSettings& opt = {}) {
  if (cfg.mode() != ExpectationMode::kSoftmax) {
    throw ValidationError(
        "softmax certification needs a softmax ensemble "
        "configuration");
  }
  const ExpectationBounds bounds =
      bound_softmax(softmax_sums(c, x, run, sample_index), run.alpha());
  return certify_ensemble(bounds, run.noise(), cfg, opt);
}

struct BinomialCertificate {
  ExpectationBounds bounds;  // e1 is the implied 1 - e0
  CertificationOutcome outcome;
};

// Two-stage binomial procedure: the class is chosen from n0 draws, then a
// fresh set of n draws estimates only that class. A wrong selection cannot
// be corrected by the second stage.
inline BinomialCertificate binomial_certify_original_detailed(
    const SyntheticClassifier& c, std::span<const double> x,
    const SimulationRun& run, std::uint32_t sample_index = 0) {
  Philox4x32 select_rng(run.seed(), sample_index,
                        static_cast<std::uint32_t>(DrawPhase::kSelect));
  const RawCounts selection =
      internal::draw_counts(c, x, run.n0(), run.sigma(), select_rng);
  const int chosen = internal::top_two(selection.counts()).first;

  Philox4x32 estimate_rng(run.seed(), sample_index,
                          static_cast<std::uint32_t>(DrawPhase::kEstimate));
  const RawCounts estimate =
      internal::draw_counts(c, x, run.n(), run.sigma(), estimate_rng);
  const double e0 = beta_interval(estimate.counts()[chosen], run.n(),
                                  run.alpha(), BoundSide::kLower);
  CertificationOutcome::Radii radii{};
  if (e0 > 0.5) {
    radii[index_of(MechanismId::kCohen)] =
        std_normal_quantile(e0) * run.sigma();
  }
  return {ExpectationBounds::create(e0, 1.0 - e0, ExpectationMode::kMultinomial,
                                    run.n(), run.alpha(), chosen),
          CertificationOutcome::from_radii(chosen, radii,
                                           MechanismSet{MechanismId::kCohen})};
}

inline CertificationOutcome binomial_certify_original(
    const SyntheticClassifier& c, std::span<const double> x,
    const SimulationRun& run, std::uint32_t sample_index = 0) {
  return binomial_certify_original_detailed(c, x, run, sample_index).outcome;
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_SIMULATE_HPP_
