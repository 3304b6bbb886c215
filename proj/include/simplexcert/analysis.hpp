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

// Simplex sweeps, regions of superiority and dataset-level metrics.

#ifndef SIMPLEXCERT_ANALYSIS_HPP_
#define SIMPLEXCERT_ANALYSIS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simplexcert/confidence.hpp"
#include "simplexcert/core.hpp"
#include "simplexcert/ensemble.hpp"
#include "simplexcert/errors.hpp"
#include "simplexcert/mechanisms.hpp"
#include "simplexcert/parallel.hpp"
#include "simplexcert/wilcoxon.hpp"

namespace simplexcert {

// Dense row-major matrix. Row i is e0 = i / (R - 1), column j is
// e1 = j / (R - 1).
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  std::span<const T> data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;

inline constexpr double kMasked = std::numeric_limits<double>::quiet_NaN();

class SweepGrid {
 public:
  SweepGrid(std::size_t resolution, double sigma, ExpectationMode mode,
            MechanismSet mechanisms)
      : resolution_(resolution),
        sigma_(sigma),
        mode_(mode),
        mechanisms_(mechanisms) {
    for (MechanismId id : mechanisms.members()) {
      values_[index_of(id)] = RealMatrix(resolution, resolution, kMasked);
    }
  }

  std::size_t resolution() const { return resolution_; }
  double sigma() const { return sigma_; }
  ExpectationMode mode() const { return mode_; }
  MechanismSet mechanisms() const { return mechanisms_; }

  double coordinate(std::size_t i) const {
    return static_cast<double>(i) / static_cast<double>(resolution_ - 1);
  }
  // e0 >= e1 and e0 + e1 <= 1 on the lattice.
  bool feasible(std::size_t i, std::size_t j) const {
    return j <= i && i + j <= resolution_ - 1;
  }

  const RealMatrix& values(MechanismId id) const {
    require(id);
    return values_[index_of(id)];
  }
  RealMatrix& mutable_values(MechanismId id) {
    require(id);
    return values_[index_of(id)];
  }

  void require(MechanismId id) const {
    if (!mechanisms_.contains(id)) {
      throw ValidationError(std::string(to_string(id)) +
                            " is not part of this sweep");
    }
  }

 private:
  std::size_t resolution_;
  double sigma_;
  ExpectationMode mode_;
  MechanismSet mechanisms_;
  std::array<RealMatrix, kNumMechanisms> values_;
};

// Evaluates every mechanism on the analytic lattice. Inputs go through
// make_bounds, so no confidence shrinkage is applied.
inline SweepGrid sweep_simplex(MechanismSet mechanisms,
                               const NoiseConfig& noise, std::size_t resolution,
                               ExpectationMode mode,
                               const OptimizerSettings& opt = {}) {
  if (resolution < 2) throw ValidationError("resolution must be >= 2");
  EnsembleConfig::create(mechanisms, mode);
  SweepGrid grid(resolution, noise.sigma(), mode, mechanisms);
  const auto members = mechanisms.members();
  parallel_for(resolution, [&](std::size_t i) {
    for (std::size_t j = 0; j < resolution; ++j) {
      if (!grid.feasible(i, j)) continue;
      const ExpectationBounds b =
          make_bounds(grid.coordinate(i), grid.coordinate(j), mode);
      for (MechanismId id : members) {
        grid.mutable_values(id)(i, j) = certify(id, b, noise, opt);
      }
    }
  });
  return grid;
}

inline RealMatrix diff_map(const SweepGrid& grid, MechanismId a,
                           MechanismId b) {
  const RealMatrix& va = grid.values(a);
  const RealMatrix& vb = grid.values(b);
  const std::size_t r = grid.resolution();
  RealMatrix out(r, r, kMasked);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (grid.feasible(i, j)) out(i, j) = va(i, j) - vb(i, j);
    }
  }
  return out;
}

// Numerator over the cellwise max of the denominator set. Cells where that
// max is zero are masked.
inline RealMatrix ratio_map(const SweepGrid& grid, MechanismId numerator,
                            MechanismSet denominator) {
  if (denominator.empty()) {
    throw ValidationError("ratio denominator needs a mechanism");
  }
  const RealMatrix& top = grid.values(numerator);
  for (MechanismId id : denominator.members()) grid.require(id);
  const std::size_t r = grid.resolution();
  RealMatrix out(r, r, kMasked);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (!grid.feasible(i, j)) continue;
      double bottom = 0.0;
      for (MechanismId id : denominator.members()) {
        bottom = std::max(bottom, grid.values(id)(i, j));
      }
      if (bottom > 0.0) out(i, j) = top(i, j) / bottom;
    }
  }
  return out;
}

// Edge between two lattice cells whose winning mechanisms differ, in
// (e0, e1) coordinates.
struct BoundarySegment {
  int inner = -1;  // label on the lower-index side
  int outer = -1;
  double e0_start, e1_start, e0_end, e1_end;
};

// Per-cell winning mechanism. -1 marks infeasible cells and cells where
// every radius is zero.
struct RegionMap {
  Matrix<int> labels;
  std::vector<BoundarySegment> boundaries;

  std::size_t count(MechanismId id) const {
    return static_cast<std::size_t>(std::count(labels.data().begin(),
                                               labels.data().end(),
                                               static_cast<int>(index_of(id))));
  }
};

// Winner under the ensemble tie-break; empty when all radii are zero.
inline std::optional<MechanismId> argmax_mechanism(
    const CertificationOutcome::Radii& radii, MechanismSet set) {
  std::optional<MechanismId> best;
  double best_radius = 0.0;
  for (MechanismId id : set.members()) {
    if (radii[index_of(id)] > best_radius) {
      best = id;
      best_radius = radii[index_of(id)];
    }
  }
  return best;
}

inline RegionMap region_of_superiority(const SweepGrid& grid) {
  const std::size_t r = grid.resolution();
  RegionMap map{Matrix<int>(r, r, -1), {}};
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (!grid.feasible(i, j)) continue;
      CertificationOutcome::Radii radii{};
      for (MechanismId id : grid.mechanisms().members()) {
        radii[index_of(id)] = grid.values(id)(i, j);
      }
      const auto best = argmax_mechanism(radii, grid.mechanisms());
      if (best) map.labels(i, j) = index_of(*best);
    }
  }
  // Cell (i, j) covers [i - 1/2, i + 1/2] x [j - 1/2, j + 1/2] in lattice
  // units; emit the shared edge of every differing feasible neighbour pair.
  const double h = 1.0 / static_cast<double>(r - 1);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      if (!grid.feasible(i, j)) continue;
      const int here = map.labels(i, j);
      const double e0 = grid.coordinate(i), e1 = grid.coordinate(j);
      if (i + 1 < r && grid.feasible(i + 1, j) &&
          map.labels(i + 1, j) != here) {
        map.boundaries.push_back({here, map.labels(i + 1, j), e0 + h / 2,
                                  e1 - h / 2, e0 + h / 2, e1 + h / 2});
      }
      if (j + 1 < r && grid.feasible(i, j + 1) &&
          map.labels(i, j + 1) != here) {
        map.boundaries.push_back({here, map.labels(i, j + 1), e0 - h / 2,
                                  e1 + h / 2, e0 + h / 2, e1 + h / 2});
      }
    }
  }
  return map;
}

// Per-sample version of region_of_superiority.
inline std::optional<MechanismId> classify_sample_region(
    const ExpectationBounds& b, const NoiseConfig& noise,
    MechanismSet mechanisms, const OptimizerSettings& opt = {}) {
  const EnsembleConfig cfg = EnsembleConfig::create(mechanisms, b.mode());
  return certify_ensemble(b, noise, cfg, opt).best_mechanism();
}

struct SampleRecord {
  std::string sample_id;
  std::optional<int> label;
  std::optional<RawCounts> counts;
  std::optional<SoftmaxSums> sums;
  std::optional<ExpectationBounds> bounds;
  std::optional<CertificationOutcome> outcome;

  bool correct() const {
    return label && outcome && outcome->predicted_class() == *label;
  }
};

// Computes bounds and outcome from the stored evidence.
inline void certify_record(SampleRecord& record, double alpha,
                           const NoiseConfig& noise, const EnsembleConfig& cfg,
                           const OptimizerSettings& opt = {}) {
  if (cfg.mode() == ExpectationMode::kMultinomial) {
    if (!record.counts) {
      throw ValidationError("sample " + record.sample_id + " has no counts");
    }
    record.bounds = bound_multinomial(*record.counts, alpha);
  } else {
    if (!record.sums) {
      throw ValidationError("sample " + record.sample_id +
                            " has no softmax sums");
    }
    record.bounds = bound_softmax(*record.sums, alpha);
  }
  record.outcome = certify_ensemble(*record.bounds, noise, cfg, opt);
}

inline void certify_records(std::span<SampleRecord> records, double alpha,
                            const NoiseConfig& noise, const EnsembleConfig& cfg,
                            const OptimizerSettings& opt = {}) {
  parallel_for(records.size(), [&](std::size_t i) {
    certify_record(records[i], alpha, noise, cfg, opt);
  });
}

// Which radius a curve or statistic reads. Empty means the ensemble.
using RadiusField = std::optional<MechanismId>;

inline double radius_of(const CertificationOutcome& outcome,
                        RadiusField field) {
  return field ? outcome.radius(*field) : outcome.radius_ensemble();
}

inline std::string to_string(RadiusField field) {
  return field ? std::string(to_string(*field)) : std::string("ensemble");
}

inline RadiusField parse_radius_field(std::string_view text) {
  if (text == "ensemble") return std::nullopt;
  return parse_mechanism(text);
}

struct CurvePoint {
  double radius;
  double accuracy;
};

// c_A(r) = (1/N) sum 1[predicted = label] 1[radius > r]. Records without an
// outcome count as uncertified.
inline std::vector<CurvePoint> certified_accuracy_curve(
    std::span<const SampleRecord> records, std::span<const double> radii,
    RadiusField field) {
  for (const SampleRecord& rec : records) {
    if (!rec.label) {
      throw ValidationError("sample " + rec.sample_id + " has no label");
    }
  }
  std::vector<CurvePoint> curve;
  curve.reserve(radii.size());
  for (double r : radii) {
    std::size_t hits = 0;
    for (const SampleRecord& rec : records) {
      if (rec.correct() && radius_of(*rec.outcome, field) > r) ++hits;
    }
    curve.push_back({r, records.empty()
                            ? 0.0
                            : static_cast<double>(hits) /
                                  static_cast<double>(records.size())});
  }
  return curve;
}

struct MechanismStats {
  double median_radius = 0.0;
  double proportion_largest = 0.0;
  double proportion_above = 0.0;
};

struct ImprovementStats {
  double wilcoxon_statistic = 0.0;
  double p_value = 1.0;
  bool exact = true;
  double proportion_improved = 0.0;
  double median_absolute = 0.0;
  double mean_absolute = 0.0;
  // Over samples with a positive baseline radius; NaN when there are none.
  double median_percentage = kMasked;
  double mean_percentage = kMasked;
  std::size_t infinite_count = 0;
};

struct DatasetSummary {
  std::size_t samples = 0;
  std::size_t labelled = 0;
  std::optional<double> top1_accuracy;
  double threshold = 0.05;
  MechanismSet mechanisms;
  std::array<std::optional<MechanismStats>, kNumMechanisms> per_mechanism;
  double ensemble_median_radius = 0.0;
  double ensemble_proportion_above = 0.0;
  MechanismId baseline = MechanismId::kCohen;
  ImprovementStats improvement;
};

namespace internal {

inline double median(std::vector<double> v) {
  if (v.empty()) return kMasked;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lower + upper);
}

inline double mean(std::span<const double> v) {
  if (v.empty()) return kMasked;
  double total = 0.0;
  for (double x : v) total += x;
  return total / static_cast<double>(v.size());
}

}  // namespace internal

// Dataset metrics over the mechanisms enabled on every record. Improvement
// statistics compare the ensemble radius against `baseline`.
inline DatasetSummary summarize(std::span<const SampleRecord> records,
                                double threshold = 0.05,
                                MechanismId baseline = MechanismId::kCohen) {
  if (records.empty()) throw ValidationError("no records to summarize");
  if (!std::isfinite(threshold) || threshold < 0.0) {
    throw ValidationError("threshold must be >= 0");
  }
  DatasetSummary s;
  s.samples = records.size();
  s.threshold = threshold;
  s.baseline = baseline;
  s.mechanisms = MechanismSet::all();
  std::size_t correct = 0;
  for (const SampleRecord& rec : records) {
    if (!rec.outcome) {
      throw ValidationError("sample " + rec.sample_id + " was not certified");
    }
    MechanismSet keep;
    for (MechanismId id : s.mechanisms.members()) {
      if (rec.outcome->enabled().contains(id)) keep.insert(id);
    }
    s.mechanisms = keep;
    if (rec.label) {
      ++s.labelled;
      correct += rec.correct();
    }
  }
  if (!s.mechanisms.contains(baseline)) {
    throw ValidationError("baseline " + std::string(to_string(baseline)) +
                          " is not enabled on every sample");
  }
  if (s.labelled > 0) {
    s.top1_accuracy =
        static_cast<double>(correct) / static_cast<double>(s.labelled);
  }

  const double n = static_cast<double>(records.size());
  std::array<std::size_t, kNumMechanisms> largest{};
  for (const SampleRecord& rec : records) {
    CertificationOutcome::Radii radii{};
    for (MechanismId id : s.mechanisms.members()) {
      radii[index_of(id)] = rec.outcome->radius(id);
    }
    if (auto best = argmax_mechanism(radii, s.mechanisms)) {
      ++largest[index_of(*best)];
    }
  }
  for (MechanismId id : s.mechanisms.members()) {
    std::vector<double> r;
    std::size_t above = 0;
    for (const SampleRecord& rec : records) {
      r.push_back(rec.outcome->radius(id));
      above += r.back() > threshold;
    }
    s.per_mechanism[index_of(id)] =
        MechanismStats{internal::median(std::move(r)),
                       static_cast<double>(largest[index_of(id)]) / n,
                       static_cast<double>(above) / n};
  }

  // Ensemble over the common set, so records with extra mechanisms do not
  // skew the comparison.
  std::vector<double> ensemble, base, absolute, percentage;
  std::size_t above = 0, improved = 0;
  ImprovementStats& imp = s.improvement;
  for (const SampleRecord& rec : records) {
    double e = 0.0;
    for (MechanismId id : s.mechanisms.members()) {
      e = std::max(e, rec.outcome->radius(id));
    }
    const double b = rec.outcome->radius(baseline);
    ensemble.push_back(e);
    base.push_back(b);
    absolute.push_back(e - b);
    above += e > threshold;
    improved += e > b;
    if (b > 0.0) {
      percentage.push_back(100.0 * (e - b) / b);
    } else if (e > 0.0) {
      ++imp.infinite_count;
    }
  }
  s.ensemble_median_radius = internal::median(ensemble);
  s.ensemble_proportion_above = static_cast<double>(above) / n;

  const WilcoxonResult w = wilcoxon_pratt(ensemble, base);
  imp.wilcoxon_statistic = w.statistic;
  imp.p_value = w.p_value;
  imp.exact = w.exact;
  imp.proportion_improved = static_cast<double>(improved) / n;
  imp.mean_absolute = internal::mean(absolute);
  imp.median_absolute = internal::median(std::move(absolute));
  imp.mean_percentage = internal::mean(percentage);
  imp.median_percentage = internal::median(std::move(percentage));
  return s;
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_ANALYSIS_HPP_
