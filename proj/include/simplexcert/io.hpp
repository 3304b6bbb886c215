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

// Delimited-text ingestion and emission. Files are UTF-8, comma separated,
// with '\n' line endings and a single header row.

#ifndef SIMPLEXCERT_IO_HPP_
#define SIMPLEXCERT_IO_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>

#include "simplexcert/analysis.hpp"
#include "simplexcert/confidence.hpp"
#include "simplexcert/core.hpp"
#include "simplexcert/errors.hpp"

namespace simplexcert {

inline constexpr int kRadiusDigits = 9;
inline constexpr int kExactDigits = 17;
inline constexpr int kProportionDecimals = 4;

// Fixed significant digits; NaN prints as an empty field.
inline std::string format_real(double value, int digits = kRadiusDigits) {
  if (std::isnan(value)) return "";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

inline std::string format_fixed(double value, int decimals) {
  if (std::isnan(value)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading " + path.string());
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory " + path.parent_path().string() +
                    ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

namespace internal {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Lines without their terminators; a trailing '\r' is dropped.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

class RowContext {
 public:
  RowContext(const std::string& source, std::size_t line)
      : source_(source), line_(line) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

  std::int64_t integer(std::string_view text, std::string_view column) const {
    std::int64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
      fail("column " + std::string(column) + ": expected an integer, got '" +
           std::string(text) + "'");
    }
    return value;
  }

  double real(std::string_view text, std::string_view column) const {
    if (text == "nan" || text == "NaN") {
      fail("column " + std::string(column) + ": NaN is not allowed");
    }
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      fail("column " + std::string(column) + ": expected a number, got '" +
           std::string(text) + "'");
    }
    return value;
  }

  std::optional<int> label(std::string_view text) const {
    if (text.empty()) return std::nullopt;
    const std::int64_t v = integer(text, "label");
    if (v < 0 || v > INT32_MAX) fail("label must be a class index");
    return static_cast<int>(v);
  }

 private:
  const std::string& source_;
  std::size_t line_;
};

}  // namespace internal

struct IngestResult {
  ExpectationMode mode = ExpectationMode::kMultinomial;
  std::vector<SampleRecord> records;
  std::vector<std::string> warnings;
};

// Reads either evidence format; the header decides which:
//   sample_id,label,n,c0,...,c{K-1}   (integer counts)
//   sample_id,label,n,s0,...,s{K-1}   (summed softmax mass)
// An empty label field means the label is unknown.
inline IngestResult parse_evidence(std::string_view text,
                                   const std::string& source) {
  IngestResult result;
  const auto lines = internal::split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && lines[first].empty()) ++first;
  if (first == lines.size()) {
    result.warnings.push_back(source + ": file is empty, no samples read");
    return result;
  }
  const internal::RowContext header_ctx(source, first + 1);
  const auto header = internal::split_fields(lines[first]);
  if (header.size() < 4 || header[0] != "sample_id" || header[1] != "label" ||
      header[2] != "n") {
    header_ctx.fail(
        "header must start with sample_id,label,n followed by "
        "c0.. or s0.. columns");
  }
  const char prefix = header[3].empty() ? '\0' : header[3][0];
  if (prefix != 'c' && prefix != 's') {
    header_ctx.fail("column 4 must be c0 (counts) or s0 (softmax sums)");
  }
  result.mode =
      prefix == 'c' ? ExpectationMode::kMultinomial : ExpectationMode::kSoftmax;
  const std::size_t classes = header.size() - 3;
  for (std::size_t k = 0; k < classes; ++k) {
    if (header[3 + k] != std::string(1, prefix) + std::to_string(k)) {
      header_ctx.fail("expected column " + std::string(1, prefix) +
                      std::to_string(k) + ", got '" +
                      std::string(header[3 + k]) + "'");
    }
  }

  std::unordered_set<std::string> seen;
  for (std::size_t li = first + 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const internal::RowContext ctx(source, li + 1);
    const auto fields = internal::split_fields(lines[li]);
    if (fields.size() != header.size()) {
      ctx.fail("expected " + std::to_string(header.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    SampleRecord rec;
    rec.sample_id = std::string(fields[0]);
    if (rec.sample_id.empty()) ctx.fail("sample_id must not be empty");
    if (!seen.insert(rec.sample_id).second) {
      ctx.fail("duplicate sample_id '" + rec.sample_id + "'");
    }
    rec.label = ctx.label(fields[1]);
    if (rec.label && static_cast<std::size_t>(*rec.label) >= classes) {
      ctx.fail("label " + std::to_string(*rec.label) + " exceeds class count");
    }
    const std::int64_t n = ctx.integer(fields[2], "n");
    try {
      if (result.mode == ExpectationMode::kMultinomial) {
        std::vector<std::int64_t> counts;
        for (std::size_t k = 0; k < classes; ++k) {
          counts.push_back(ctx.integer(fields[3 + k], header[3 + k]));
        }
        rec.counts = RawCounts::create(std::move(counts), n);
      } else {
        std::vector<double> sums;
        for (std::size_t k = 0; k < classes; ++k) {
          sums.push_back(ctx.real(fields[3 + k], header[3 + k]));
        }
        rec.sums = SoftmaxSums::create(std::move(sums), n);
      }
    } catch (const ValidationError& e) {
      ctx.fail(e.what());
    }
    result.records.push_back(std::move(rec));
  }
  if (result.records.empty()) {
    result.warnings.push_back(source + ": no sample rows after the header");
  }
  return result;
}

inline IngestResult ingest_evidence(const std::filesystem::path& path) {
  return parse_evidence(read_text_file(path), path.string());
}

inline std::string evidence_csv(std::span<const SampleRecord> records,
                                ExpectationMode mode) {
  std::size_t classes = 0;
  for (const SampleRecord& rec : records) {
    const std::size_t k = mode == ExpectationMode::kMultinomial
                              ? (rec.counts ? rec.counts->num_classes() : 0)
                              : (rec.sums ? rec.sums->num_classes() : 0);
    if (k == 0) {
      throw ValidationError("sample " + rec.sample_id + " has no evidence");
    }
    if (classes != 0 && k != classes) {
      throw ValidationError("samples disagree on the class count");
    }
    classes = k;
  }
  const char prefix = mode == ExpectationMode::kMultinomial ? 'c' : 's';
  std::string out = "sample_id,label,n";
  for (std::size_t k = 0; k < classes; ++k) {
    out += ',';
    out += prefix;
    out += std::to_string(k);
  }
  out += '\n';
  for (const SampleRecord& rec : records) {
    out += rec.sample_id + ',' + (rec.label ? std::to_string(*rec.label) : "");
    if (mode == ExpectationMode::kMultinomial) {
      out += ',' + std::to_string(rec.counts->n());
      for (std::int64_t c : rec.counts->counts())
        out += ',' + std::to_string(c);
    } else {
      out += ',' + std::to_string(rec.sums->n());
      for (double s : rec.sums->sums())
        out += ',' + format_real(s, kExactDigits);
    }
    out += '\n';
  }
  return out;
}

// Per-sample results.
inline constexpr std::string_view kSamplesHeader =
    "sample_id,label,mode,n,alpha,predicted,e0,e1,cohen,li,lecuyer,"
    "improved_dp,ensemble,abstained,enabled";

inline std::string samples_csv(std::span<const SampleRecord> records) {
  std::string out(kSamplesHeader);
  out += '\n';
  for (const SampleRecord& rec : records) {
    if (!rec.bounds || !rec.outcome) {
      throw ValidationError("sample " + rec.sample_id + " was not certified");
    }
    const ExpectationBounds& b = *rec.bounds;
    const CertificationOutcome& o = *rec.outcome;
    out += rec.sample_id;
    out += ',' + (rec.label ? std::to_string(*rec.label) : std::string());
    out += ',' + std::string(to_string(b.mode()));
    out += ',' + std::to_string(b.n());
    out += ',' + format_real(b.alpha(), kExactDigits);
    out += ',' + std::to_string(o.predicted_class());
    out += ',' + format_real(b.e0(), kExactDigits);
    out += ',' + format_real(b.e1(), kExactDigits);
    for (MechanismId id : kAllMechanisms)
      out += ',' + format_real(o.radius(id));
    out += ',' + format_real(o.radius_ensemble());
    out += o.abstained() ? ",1" : ",0";
    out += ',' + o.enabled().to_string();
    out += '\n';
  }
  return out;
}

inline std::vector<SampleRecord> parse_samples(std::string_view text,
                                               const std::string& source) {
  std::vector<SampleRecord> records;
  const auto lines = internal::split_lines(text);
  if (lines.empty() || lines[0] != kSamplesHeader) {
    internal::RowContext(source, 1).fail("unexpected header; expected " +
                                         std::string(kSamplesHeader));
  }
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    const internal::RowContext ctx(source, li + 1);
    const auto f = internal::split_fields(lines[li]);
    if (f.size() != 15) {
      ctx.fail("expected 15 fields, got " + std::to_string(f.size()));
    }
    try {
      SampleRecord rec;
      rec.sample_id = std::string(f[0]);
      rec.label = ctx.label(f[1]);
      const ExpectationMode mode = parse_mode(f[2]);
      const std::int64_t n = ctx.integer(f[3], "n");
      const double alpha = ctx.real(f[4], "alpha");
      const std::int64_t predicted = ctx.integer(f[5], "predicted");
      if (predicted < 0 || predicted > INT32_MAX)
        ctx.fail("bad predicted class");
      rec.bounds = ExpectationBounds::create(
          ctx.real(f[6], "e0"), ctx.real(f[7], "e1"), mode, n, alpha,
          static_cast<int>(predicted));
      CertificationOutcome::Radii radii{};
      for (std::size_t k = 0; k < kNumMechanisms; ++k) {
        radii[k] = ctx.real(f[8 + k], to_string(kAllMechanisms[k]));
      }
      rec.outcome = CertificationOutcome::from_radii(
          static_cast<int>(predicted), radii, MechanismSet::parse(f[14]));
      if (format_real(rec.outcome->radius_ensemble()) != f[12]) {
        ctx.fail("ensemble column does not match the per-mechanism maximum");
      }
      if ((f[13] == "1") != rec.outcome->abstained() ||
          (f[13] != "0" && f[13] != "1")) {
        ctx.fail("abstained column is inconsistent");
      }
      records.push_back(std::move(rec));
    } catch (const ValidationError& e) {
      ctx.fail(e.what());
    }
  }
  return records;
}

inline std::vector<SampleRecord> ingest_samples(
    const std::filesystem::path& path) {
  return parse_samples(read_text_file(path), path.string());
}

// Long-format summary: metric,subject,value.
inline std::string summary_csv(const DatasetSummary& s) {
  std::string out = "metric,subject,value\n";
  auto row = [&](std::string_view metric, std::string_view subject,
                 const std::string& value) {
    out +=
        std::string(metric) + ',' + std::string(subject) + ',' + value + '\n';
  };
  auto prop = [](double v) { return format_fixed(v, kProportionDecimals); };
  row("samples", "", std::to_string(s.samples));
  row("labelled", "", std::to_string(s.labelled));
  row("top1_accuracy", "", s.top1_accuracy ? prop(*s.top1_accuracy) : "");
  row("threshold", "", format_real(s.threshold));
  for (MechanismId id : s.mechanisms.members()) {
    const MechanismStats& m = *s.per_mechanism[index_of(id)];
    row("median_radius", to_string(id), format_real(m.median_radius));
    row("proportion_largest", to_string(id), prop(m.proportion_largest));
    row("proportion_above_threshold", to_string(id), prop(m.proportion_above));
  }
  row("median_radius", "ensemble", format_real(s.ensemble_median_radius));
  row("proportion_above_threshold", "ensemble",
      prop(s.ensemble_proportion_above));
  const std::string vs = "ensemble_vs_" + std::string(to_string(s.baseline));
  const ImprovementStats& imp = s.improvement;
  row("wilcoxon_statistic", vs, format_real(imp.wilcoxon_statistic));
  row("wilcoxon_p_value", vs, format_real(imp.p_value));
  row("wilcoxon_method", vs, imp.exact ? "exact" : "normal");
  row("proportion_improved", vs, prop(imp.proportion_improved));
  row("median_absolute_improvement", vs, format_real(imp.median_absolute));
  row("mean_absolute_improvement", vs, format_real(imp.mean_absolute));
  row("median_percentage_improvement", vs, format_real(imp.median_percentage));
  row("mean_percentage_improvement", vs, format_real(imp.mean_percentage));
  row("infinite_improvement_count", vs, std::to_string(imp.infinite_count));
  return out;
}

inline std::string curve_csv(std::span<const double> radii,
                             std::span<const RadiusField> fields,
                             std::span<const std::vector<CurvePoint>> curves) {
  std::string out = "radius";
  for (RadiusField f : fields) out += ',' + to_string(f);
  out += '\n';
  for (std::size_t k = 0; k < radii.size(); ++k) {
    out += format_real(radii[k]);
    for (const auto& curve : curves) {
      out += ',' + format_fixed(curve[k].accuracy, kProportionDecimals);
    }
    out += '\n';
  }
  return out;
}

// Lattice matrix: the first row lists e1 values, the first column e0 values.
// Masked cells are empty.
inline std::string matrix_csv(const SweepGrid& grid, const RealMatrix& m) {
  std::string out = "e0\\e1";
  for (std::size_t j = 0; j < grid.resolution(); ++j) {
    out += ',' + format_real(grid.coordinate(j));
  }
  out += '\n';
  for (std::size_t i = 0; i < grid.resolution(); ++i) {
    out += format_real(grid.coordinate(i));
    for (std::size_t j = 0; j < grid.resolution(); ++j) {
      out += ',' + format_real(m(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string label_name(int label) {
  return label < 0 ? std::string()
                   : std::string(to_string(kAllMechanisms[label]));
}

inline std::string region_csv(const SweepGrid& grid, const RegionMap& map) {
  std::string out = "e0\\e1";
  for (std::size_t j = 0; j < grid.resolution(); ++j) {
    out += ',' + format_real(grid.coordinate(j));
  }
  out += '\n';
  for (std::size_t i = 0; i < grid.resolution(); ++i) {
    out += format_real(grid.coordinate(i));
    for (std::size_t j = 0; j < grid.resolution(); ++j) {
      out += ',' + label_name(map.labels(i, j));
    }
    out += '\n';
  }
  return out;
}

inline std::string boundaries_csv(const RegionMap& map) {
  std::string out = "inner,outer,e0_start,e1_start,e0_end,e1_end\n";
  for (const BoundarySegment& s : map.boundaries) {
    out += label_name(s.inner) + ',' + label_name(s.outer) + ',' +
           format_real(s.e0_start) + ',' + format_real(s.e1_start) + ',' +
           format_real(s.e0_end) + ',' + format_real(s.e1_end) + '\n';
  }
  return out;
}

}  // namespace simplexcert

#endif  // SIMPLEXCERT_IO_HPP_
