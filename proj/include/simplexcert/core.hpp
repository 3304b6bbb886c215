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

// Domain types shared by every module. All of them validate their fields on
// construction and are immutable afterwards.

#ifndef SIMPLEXCERT_CORE_HPP_
#define SIMPLEXCERT_CORE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simplexcert/errors.hpp"

namespace simplexcert {

// Smallest distance any analytic expectation is allowed to sit from 0 or 1.
inline constexpr double kExpectationClamp = 1e-12;

enum class ExpectationMode { kSoftmax, kMultinomial };

inline std::string_view to_string(ExpectationMode mode) {
  return mode == ExpectationMode::kSoftmax ? "softmax" : "multinomial";
}

inline ExpectationMode parse_mode(std::string_view text) {
  if (text == "softmax") return ExpectationMode::kSoftmax;
  if (text == "multinomial") return ExpectationMode::kMultinomial;
  throw ValidationError("unknown expectation mode '" + std::string(text) +
                        "' (expected softmax or multinomial)");
}

// The order of the enumerators is the tie-break order used whenever several
// mechanisms produce the same radius: earlier wins.
enum class MechanismId { kCohen = 0, kLi = 1, kLecuyer = 2, kImprovedDp = 3 };

inline constexpr std::size_t kNumMechanisms = 4;
inline constexpr std::array<MechanismId, kNumMechanisms> kAllMechanisms = {
    MechanismId::kCohen, MechanismId::kLi, MechanismId::kLecuyer,
    MechanismId::kImprovedDp};

inline constexpr std::size_t index_of(MechanismId id) {
  return static_cast<std::size_t>(id);
}

inline std::string_view to_string(MechanismId id) {
  switch (id) {
    case MechanismId::kCohen:
      return "cohen";
    case MechanismId::kLi:
      return "li";
    case MechanismId::kLecuyer:
      return "lecuyer";
    case MechanismId::kImprovedDp:
      return "improved_dp";
  }
  return "?";
}

inline MechanismId parse_mechanism(std::string_view text) {
  for (MechanismId id : kAllMechanisms) {
    if (to_string(id) == text) return id;
  }
  throw ValidationError("unknown mechanism '" + std::string(text) + "'");
}

// Small ordered set of mechanisms. Iteration follows the tie-break order.
class MechanismSet {
 public:
  constexpr MechanismSet() = default;
  MechanismSet(std::initializer_list<MechanismId> ids) {
    for (MechanismId id : ids) insert(id);
  }

  static MechanismSet all() {
    return {MechanismId::kCohen, MechanismId::kLi, MechanismId::kLecuyer,
            MechanismId::kImprovedDp};
  }

  // Parses a list such as "cohen|li|improved_dp". Separators '|' and ','
  // are both accepted. An empty string yields the empty set.
  static MechanismSet parse(std::string_view text) {
    MechanismSet set;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find_first_of("|,", start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view item = text.substr(start, end - start);
      if (!item.empty()) set.insert(parse_mechanism(item));
      start = end + 1;
    }
    return set;
  }

  void insert(MechanismId id) { bits_ |= 1u << index_of(id); }
  bool contains(MechanismId id) const { return (bits_ >> index_of(id)) & 1u; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const {
    std::size_t count = 0;
    for (MechanismId id : kAllMechanisms) count += contains(id) ? 1 : 0;
    return count;
  }
  std::vector<MechanismId> members() const {
    std::vector<MechanismId> out;
    for (MechanismId id : kAllMechanisms) {
      if (contains(id)) out.push_back(id);
    }
    return out;
  }
  std::string to_string() const {
    std::string out;
    for (MechanismId id : members()) {
      if (!out.empty()) out += '|';
      out += simplexcert::to_string(id);
    }
    return out;
  }
  unsigned bits() const { return bits_; }

  friend bool operator==(const MechanismSet&, const MechanismSet&) = default;

 private:
  unsigned bits_ = 0;
};

// Worst-case bounded top-2 class expectations: `e0` is a lower confidence
// bound on the largest sorted expectation and `e1` an upper bound on the
// second largest. n == 0 and alpha == 0 mark analytic (exact) inputs.
class ExpectationBounds {
 public:
  static ExpectationBounds create(double e0, double e1, ExpectationMode mode,
                                  std::int64_t n = 0, double alpha = 0.0,
                                  int predicted_class = 0) {
    if (!std::isfinite(e0) || e0 < 0.0 || e0 > 1.0) {
      throw ValidationError("e0 must lie in [0, 1], got " + std::to_string(e0));
    }
    if (!std::isfinite(e1) || e1 < 0.0 || e1 > 1.0) {
      throw ValidationError("e1 must lie in [0, 1], got " + std::to_string(e1));
    }
    if (n < 0) throw ValidationError("sample count must be >= 0");
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0) {
      throw ValidationError(
          "alpha must lie in (0, 1), or be 0 for exact input");
    }
    if (predicted_class < 0) {
      throw ValidationError("predicted class must be non-negative");
    }
    return ExpectationBounds(e0, e1, mode, n, alpha, predicted_class);
  }

  double e0() const { return e0_; }
  double e1() const { return e1_; }
  ExpectationMode mode() const { return mode_; }
  std::int64_t n() const { return n_; }
  double alpha() const { return alpha_; }
  int predicted_class() const { return predicted_class_; }
  bool is_analytic() const { return n_ == 0 && alpha_ == 0.0; }
  // Certification can only succeed when the bounds do not cross.
  bool separated() const { return e0_ > e1_; }

  friend bool operator==(const ExpectationBounds&,
                         const ExpectationBounds&) = default;

 private:
  ExpectationBounds(double e0, double e1, ExpectationMode mode, std::int64_t n,
                    double alpha, int predicted_class)
      : e0_(e0),
        e1_(e1),
        mode_(mode),
        n_(n),
        alpha_(alpha),
        predicted_class_(predicted_class) {}

  double e0_;
  double e1_;
  ExpectationMode mode_;
  std::int64_t n_;
  double alpha_;
  int predicted_class_;
};

inline double clamp_expectation(double value) {
  return std::clamp(value, kExpectationClamp, 1.0 - kExpectationClamp);
}

// Analytic bounds for sweeps and single-point queries. Values are clamped
// into [1e-12, 1 - 1e-12] so quantiles and negative powers stay finite.
inline ExpectationBounds make_bounds(double e0, double e1,
                                     ExpectationMode mode) {
  if (!std::isfinite(e0) || e0 < 0.0 || e0 > 1.0 || !std::isfinite(e1) ||
      e1 < 0.0 || e1 > 1.0) {
    throw ValidationError("expectations must lie in [0, 1]");
  }
  return ExpectationBounds::create(clamp_expectation(e0), clamp_expectation(e1),
                                   mode);
}

// A point of the sorted top-2 projection of the probability simplex.
class SimplexPoint {
 public:
  static SimplexPoint create(double e0, double e1) {
    // Allow a few ulps of slack on the e0 + e1 <= 1 face so lattice points
    // computed as i/(R-1) + j/(R-1) are not rejected by rounding.
    constexpr double kSlack = 1e-12;
    if (!std::isfinite(e0) || !std::isfinite(e1) || e1 < 0.0 || e0 < e1 ||
        e0 + e1 > 1.0 + kSlack) {
      throw ValidationError(
          "simplex point requires e0 >= e1 >= 0 and "
          "e0 + e1 <= 1");
    }
    return SimplexPoint(e0, e1);
  }
  static bool feasible(double e0, double e1) {
    return std::isfinite(e0) && std::isfinite(e1) && e1 >= 0.0 && e0 >= e1 &&
           e0 + e1 <= 1.0 + 1e-12;
  }

  double e0() const { return e0_; }
  double e1() const { return e1_; }

 private:
  SimplexPoint(double e0, double e1) : e0_(e0), e1_(e1) {}
  double e0_;
  double e1_;
};

// Isotropic Gaussian smoothing noise and the sensitivity of the
// pre-processing map (1 for the identity).
class NoiseConfig {
 public:
  static NoiseConfig create(double sigma, double delta_sens = 1.0) {
    if (!std::isfinite(sigma) || sigma <= 0.0) {
      throw ValidationError("sigma must be > 0");
    }
    if (!std::isfinite(delta_sens) || delta_sens <= 0.0) {
      throw ValidationError("sensitivity must be > 0");
    }
    return NoiseConfig(sigma, delta_sens);
  }

  double sigma() const { return sigma_; }
  double delta_sens() const { return delta_sens_; }

 private:
  NoiseConfig(double sigma, double delta_sens)
      : sigma_(sigma), delta_sens_(delta_sens) {}
  double sigma_;
  double delta_sens_;
};

// Per-mechanism radii for one sample together with their maximum.
class CertificationOutcome {
 public:
  using Radii = std::array<double, kNumMechanisms>;

  // Radii of mechanisms outside `enabled` must be zero.
  static CertificationOutcome from_radii(int predicted_class,
                                         const Radii& radii,
                                         MechanismSet enabled) {
    if (predicted_class < 0) {
      throw ValidationError("predicted class must be non-negative");
    }
    double best = 0.0;
    for (MechanismId id : kAllMechanisms) {
      double r = radii[index_of(id)];
      if (!std::isfinite(r) || r < 0.0) {
        throw ValidationError("radius for " + std::string(to_string(id)) +
                              " must be finite and >= 0");
      }
      if (!enabled.contains(id) && r != 0.0) {
        throw ValidationError("radius reported for disabled mechanism " +
                              std::string(to_string(id)));
      }
      best = std::max(best, r);
    }
    return CertificationOutcome(predicted_class, radii, best, enabled);
  }

  static CertificationOutcome abstain(int predicted_class,
                                      MechanismSet enabled) {
    return from_radii(predicted_class, Radii{}, enabled);
  }

  int predicted_class() const { return predicted_class_; }
  double radius(MechanismId id) const { return radii_[index_of(id)]; }
  double radius_cohen() const { return radius(MechanismId::kCohen); }
  double radius_li() const { return radius(MechanismId::kLi); }
  double radius_lecuyer() const { return radius(MechanismId::kLecuyer); }
  double radius_improved_dp() const { return radius(MechanismId::kImprovedDp); }
  double radius_ensemble() const { return ensemble_; }
  const Radii& radii() const { return radii_; }
  MechanismSet enabled() const { return enabled_; }
  bool abstained() const { return ensemble_ == 0.0; }

  // Mechanism attaining the ensemble radius, earliest in tie-break order.
  // Empty when every radius is zero.
  std::optional<MechanismId> best_mechanism() const {
    if (abstained()) return std::nullopt;
    for (MechanismId id : kAllMechanisms) {
      if (enabled_.contains(id) && radius(id) == ensemble_) return id;
    }
    return std::nullopt;
  }

  friend bool operator==(const CertificationOutcome&,
                         const CertificationOutcome&) = default;

 private:
  CertificationOutcome(int predicted_class, const Radii& radii, double ensemble,
                       MechanismSet enabled)
      : predicted_class_(predicted_class),
        radii_(radii),
        ensemble_(ensemble),
        enabled_(enabled) {}

  int predicted_class_;
  Radii radii_;
  double ensemble_;
  MechanismSet enabled_;
};

}  // namespace simplexcert

#endif  // SIMPLEXCERT_CORE_HPP_
