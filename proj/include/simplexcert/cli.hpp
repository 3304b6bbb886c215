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

// Command-line front end shared by the simplexcert binary and its tests.

#ifndef SIMPLEXCERT_CLI_HPP_
#define SIMPLEXCERT_CLI_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "simplexcert/analysis.hpp"
#include "simplexcert/confidence.hpp"
#include "simplexcert/core.hpp"
#include "simplexcert/ensemble.hpp"
#include "simplexcert/errors.hpp"
#include "simplexcert/io.hpp"
#include "simplexcert/mechanisms.hpp"
#include "simplexcert/simulate.hpp"
#include "simplexcert/svg.hpp"

namespace simplexcert::cli {

enum class Command { kCertify, kSweep, kDataset, kSimulate, kAnalyze };
enum class Algorithm { kMultinomial, kSoftmax, kBinomial };

struct RunConfig {
  Command command = Command::kCertify;
  double sigma = 1.0;
  double alpha = 0.001;
  std::int64_t n = 100000;
  std::int64_t n0 = 100;
  std::optional<ExpectationMode> mode;
  std::string mechanisms;  // empty: every mechanism the mode supports
  double threshold = 0.05;
  std::size_t resolution = 200;
  std::uint64_t seed = 1;
  std::string input;
  std::string output;
  bool render = false;
  // Empty: cohen when enabled, otherwise the first enabled mechanism.
  std::optional<MechanismId> baseline;
  int grid_points = OptimizerSettings{}.grid_points();

  // certify
  std::optional<double> e0;
  std::optional<double> e1;
  std::vector<std::int64_t> counts;
  std::vector<double> sums;

  // simulate
  std::vector<double> probabilities;
  std::vector<double> weights;
  double offset = 0.0;
  std::vector<double> point;
  Algorithm algorithm = Algorithm::kMultinomial;
  std::size_t replicates = 1000;

  ExpectationMode effective_mode() const {
    if (mode) return *mode;
    if (command == Command::kCertify && !sums.empty()) {
      return ExpectationMode::kSoftmax;
    }
    if (command == Command::kSimulate && algorithm == Algorithm::kSoftmax) {
      return ExpectationMode::kSoftmax;
    }
    return ExpectationMode::kMultinomial;
  }

  EnsembleConfig ensemble(ExpectationMode m) const {
    if (mechanisms.empty()) return EnsembleConfig::full(m);
    return EnsembleConfig::create(MechanismSet::parse(mechanisms), m);
  }

  MechanismId baseline_for(std::span<const SampleRecord> records) const {
    if (baseline) return *baseline;
    MechanismSet common = MechanismSet::all();
    for (const SampleRecord& rec : records) {
      if (!rec.outcome) continue;
      MechanismSet keep;
      for (MechanismId id : common.members()) {
        if (rec.outcome->enabled().contains(id)) keep.insert(id);
      }
      common = keep;
    }
    const auto members = common.members();
    return members.empty() ? MechanismId::kCohen : members.front();
  }

  OptimizerSettings optimizer() const {
    return OptimizerSettings{}.with_grid_points(grid_points);
  }
};

namespace internal {

inline void validate(const RunConfig& c) {
  auto bad = [](const std::string& what) { throw UsageError(what); };
  if (!(c.sigma > 0.0) || !std::isfinite(c.sigma)) bad("--sigma must be > 0");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) bad("--alpha must lie in (0, 1)");
  if (c.n < 1) bad("--n must be >= 1");
  if (c.n0 < 1) bad("--n0 must be >= 1");
  if (!(c.threshold >= 0.0) || !std::isfinite(c.threshold)) {
    bad("--threshold must be >= 0");
  }
  if (c.resolution < 2) bad("--resolution must be >= 2");
  if (c.grid_points < 3) bad("--grid-points must be >= 3");
  if (c.replicates < 1) bad("--replicates must be >= 1");
  try {
    c.ensemble(c.effective_mode());
  } catch (const ValidationError& e) {
    bad(std::string("--mechanisms: ") + e.what());
  }
  switch (c.command) {
    case Command::kCertify: {
      const int sources = (c.e0 || c.e1 ? 1 : 0) + (c.counts.empty() ? 0 : 1) +
                          (c.sums.empty() ? 0 : 1);
      if (sources != 1) {
        bad("certify needs exactly one of --e0/--e1, --counts or --sums");
      }
      if ((c.e0 || c.e1) && !(c.e0 && c.e1)) bad("--e0 and --e1 go together");
      if (!c.counts.empty() &&
          c.effective_mode() != ExpectationMode::kMultinomial) {
        bad("--counts needs --mode multinomial");
      }
      if (!c.sums.empty() && c.effective_mode() != ExpectationMode::kSoftmax) {
        bad("--sums needs --mode softmax");
      }
      break;
    }
    case Command::kSweep:
      if (c.output.empty()) bad("sweep needs --out");
      break;
    case Command::kDataset:
    case Command::kAnalyze:
      if (c.input.empty()) bad("--input is required");
      if (c.output.empty()) bad("--out is required");
      break;
    case Command::kSimulate: {
      if (c.output.empty()) bad("simulate needs --out");
      const bool fixed = !c.probabilities.empty();
      const bool linear = !c.weights.empty();
      if (fixed == linear)
        bad("simulate needs exactly one of --p or --weights");
      if (linear && c.point.size() != c.weights.size()) {
        bad("--point must have the same dimension as --weights");
      }
      const bool softmax = c.algorithm == Algorithm::kSoftmax;
      if (softmax != (c.effective_mode() == ExpectationMode::kSoftmax)) {
        bad("--algorithm softmax pairs with --mode softmax");
      }
      if (c.algorithm == Algorithm::kBinomial && !c.mechanisms.empty() &&
          MechanismSet::parse(c.mechanisms) !=
              MechanismSet{MechanismId::kCohen}) {
        bad("the binomial algorithm certifies with cohen only");
      }
      break;
    }
  }
}

}  // namespace internal

// Parses argv. Returns nullopt when help was printed to `out`.
inline std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                           std::ostream& out) {
  RunConfig c;
  CLI::App app{"Certified robustness radii for randomized smoothing",
               "simplexcert"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string mode, baseline, algorithm = "multinomial";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--sigma", c.sigma, "Noise standard deviation");
    sub->add_option("--mode", mode, "Expectation mode: multinomial or softmax");
    sub->add_option("--mechanisms", c.mechanisms,
                    "Mechanisms joined by '|' (default: all for the mode)");
    sub->add_option("--grid-points", c.grid_points,
                    "Optimizer grid points per search");
  };
  auto outputs = [&](CLI::App* sub) {
    sub->add_option("--out", c.output, "Output directory");
    sub->add_flag("--render", c.render, "Also write SVG figures");
  };
  auto summary = [&](CLI::App* sub) {
    sub->add_option("--threshold", c.threshold,
                    "Radius threshold for proportion columns");
    sub->add_option("--baseline", baseline,
                    "Baseline mechanism for improvement statistics "
                    "(default: cohen, else the first enabled)");
  };

  CLI::App* certify = app.add_subcommand("certify", "Certify one sample");
  common(certify);
  certify->add_option("--alpha", c.alpha, "Confidence level of the bounds");
  certify->add_option("--e0", c.e0, "Top expectation (analytic)");
  certify->add_option("--e1", c.e1, "Runner-up expectation (analytic)");
  certify->add_option("--counts", c.counts, "Class counts")->delimiter(',');
  certify->add_option("--sums", c.sums, "Summed softmax scores")
      ->delimiter(',');
  certify->add_option("--n", c.n, "Draw count for --sums");

  CLI::App* sweep = app.add_subcommand("sweep", "Evaluate the simplex lattice");
  common(sweep);
  outputs(sweep);
  sweep->add_option("--resolution", c.resolution, "Lattice points per axis");

  CLI::App* dataset =
      app.add_subcommand("dataset", "Certify every sample of a count file");
  common(dataset);
  outputs(dataset);
  summary(dataset);
  dataset->add_option("--input", c.input, "Count or softmax-sum CSV")
      ->check(CLI::ExistingFile);
  dataset->add_option("--alpha", c.alpha, "Confidence level of the bounds");
  dataset->add_option("--resolution", c.resolution,
                      "Lattice resolution of the rendered region overlay");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo smoothing of a synthetic model");
  common(simulate);
  outputs(simulate);
  summary(simulate);
  simulate->add_option("--alpha", c.alpha, "Confidence level of the bounds");
  simulate->add_option("--n", c.n, "Draws per sample");
  simulate->add_option("--n0", c.n0, "Selection draws (binomial algorithm)");
  simulate->add_option("--seed", c.seed, "Random seed");
  simulate->add_option("--replicates", c.replicates, "Independent samples");
  simulate->add_option("--algorithm", algorithm,
                       "multinomial, softmax or binomial");
  simulate->add_option("--p", c.probabilities, "Fixed class distribution")
      ->delimiter(',');
  simulate->add_option("--weights", c.weights, "Linear classifier weights")
      ->delimiter(',');
  simulate->add_option("--offset", c.offset, "Linear classifier offset");
  simulate->add_option("--point", c.point, "Input point")->delimiter(',');

  CLI::App* analyze =
      app.add_subcommand("analyze", "Summarize an existing samples.csv");
  outputs(analyze);
  summary(analyze);
  analyze->add_option("--input", c.input, "samples.csv from a previous run")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (certify->parsed()) c.command = Command::kCertify;
  if (sweep->parsed()) c.command = Command::kSweep;
  if (dataset->parsed()) c.command = Command::kDataset;
  if (simulate->parsed()) c.command = Command::kSimulate;
  if (analyze->parsed()) c.command = Command::kAnalyze;
  try {
    if (!mode.empty()) c.mode = parse_mode(mode);
    if (!baseline.empty()) c.baseline = parse_mechanism(baseline);
    MechanismSet::parse(c.mechanisms);
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }
  if (algorithm == "multinomial") {
    c.algorithm = Algorithm::kMultinomial;
  } else if (algorithm == "softmax") {
    c.algorithm = Algorithm::kSoftmax;
  } else if (algorithm == "binomial") {
    c.algorithm = Algorithm::kBinomial;
  } else {
    throw UsageError("--algorithm must be multinomial, softmax or binomial");
  }
  internal::validate(c);
  return c;
}

namespace internal {

inline nlohmann::ordered_json outcome_json(const ExpectationBounds& b,
                                           const CertificationOutcome& o) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(b.mode());
  j["predicted"] = o.predicted_class();
  j["e0"] = b.e0();
  j["e1"] = b.e1();
  nlohmann::ordered_json radii = nlohmann::ordered_json::object();
  for (MechanismId id : o.enabled().members()) {
    radii[std::string(to_string(id))] = o.radius(id);
  }
  j["radii"] = radii;
  j["ensemble"] = o.radius_ensemble();
  const auto best = o.best_mechanism();
  j["best"] = best ? nlohmann::ordered_json(to_string(*best))
                   : nlohmann::ordered_json(nullptr);
  j["abstained"] = o.abstained();
  return j;
}

inline void write(const std::filesystem::path& dir, const std::string& name,
                  const std::string& content,
                  std::vector<std::string>& written) {
  write_text_file(dir / name, content);
  written.push_back(name);
}

// Radii at which curves are tabulated: 0 to the largest radius in 200 steps.
inline std::vector<double> curve_radii(std::span<const SampleRecord> records) {
  double r_max = 0.0;
  for (const SampleRecord& rec : records) {
    if (rec.outcome) r_max = std::max(r_max, rec.outcome->radius_ensemble());
  }
  if (!(r_max > 0.0)) r_max = 1.0;
  std::vector<double> radii;
  for (int k = 0; k <= 200; ++k) radii.push_back(r_max * k / 200.0);
  return radii;
}

// summary.csv, curve.csv and optional figures for certified records.
inline void emit_dataset(const RunConfig& c,
                         std::span<const SampleRecord> records,
                         std::vector<std::string>& written, std::ostream& err) {
  const std::filesystem::path dir(c.output);
  write(dir, "samples.csv", samples_csv(records), written);
  if (records.empty()) {
    err << "warning: no samples, summary skipped\n";
    return;
  }
  const DatasetSummary s =
      summarize(records, c.threshold, c.baseline_for(records));
  write(dir, "summary.csv", summary_csv(s), written);

  const bool labelled =
      std::all_of(records.begin(), records.end(),
                  [](const SampleRecord& r) { return r.label; });
  if (!labelled) {
    err << "warning: some samples have no label, certified accuracy skipped\n";
  } else {
    const std::vector<double> radii = curve_radii(records);
    std::vector<RadiusField> fields;
    for (MechanismId id : s.mechanisms.members()) fields.push_back(id);
    fields.push_back(std::nullopt);
    std::vector<std::vector<CurvePoint>> curves;
    for (RadiusField f : fields) {
      curves.push_back(certified_accuracy_curve(records, radii, f));
    }
    write(dir, "curve.csv", curve_csv(radii, fields, curves), written);
    if (c.render) {
      write(dir, "curve.svg",
            svg::accuracy_curves(fields, curves, "Certified accuracy"),
            written);
    }
  }
  if (c.render) {
    const ExpectationMode mode = records.front().bounds->mode();
    std::optional<RegionMap> overlay;
    if (s.mechanisms.size() >= 2) {
      const SweepGrid grid = sweep_simplex(
          s.mechanisms, NoiseConfig::create(c.sigma),
          std::min<std::size_t>(c.resolution, 100), mode, c.optimizer());
      overlay = region_of_superiority(grid);
    }
    write(dir, "scatter.svg",
          svg::sample_scatter(records, s.mechanisms, "Samples on the simplex",
                              overlay ? &*overlay : nullptr),
          written);
  }
}

inline int run_certify(const RunConfig& c, std::ostream& out) {
  const ExpectationMode mode = c.effective_mode();
  ExpectationBounds b = [&] {
    if (c.e0) return make_bounds(*c.e0, *c.e1, mode);
    if (!c.counts.empty()) {
      return bound_multinomial(RawCounts::create(c.counts), c.alpha);
    }
    return bound_softmax(SoftmaxSums::create(c.sums, c.n), c.alpha);
  }();
  const CertificationOutcome o = certify_ensemble(
      b, NoiseConfig::create(c.sigma), c.ensemble(mode), c.optimizer());
  nlohmann::ordered_json j;
  j["command"] = "certify";
  j["sigma"] = c.sigma;
  j.update(outcome_json(b, o));
  out << j.dump() << '\n';
  return 0;
}

inline int run_sweep(const RunConfig& c, std::ostream& out) {
  const ExpectationMode mode = c.effective_mode();
  const MechanismSet set = c.ensemble(mode).enabled();
  const SweepGrid grid = sweep_simplex(set, NoiseConfig::create(c.sigma),
                                       c.resolution, mode, c.optimizer());
  const std::filesystem::path dir(c.output);
  std::vector<std::string> written;
  const RegionMap map = region_of_superiority(grid);
  for (MechanismId id : set.members()) {
    const std::string name(to_string(id));
    write(dir, name + ".csv", matrix_csv(grid, grid.values(id)), written);
    if (c.render) {
      write(dir, name + ".svg",
            svg::heatmap(grid, grid.values(id), name + " radius", &map),
            written);
    }
  }
  write(dir, "region.csv", region_csv(grid, map), written);
  write(dir, "boundaries.csv", boundaries_csv(map), written);
  if (c.render) {
    write(dir, "region.svg",
          svg::region_map(grid, map, "Regions of superiority"), written);
  }
  const auto members = set.members();
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const std::string name = "diff_" + std::string(to_string(members[a])) +
                               "_" + std::string(to_string(members[b]));
      const RealMatrix d = diff_map(grid, members[a], members[b]);
      write(dir, name + ".csv", matrix_csv(grid, d), written);
      if (c.render)
        write(dir, name + ".svg", svg::heatmap(grid, d, name), written);
    }
  }
  double peak = kMasked;
  if (set.contains(MechanismId::kImprovedDp) && set.size() >= 2) {
    MechanismSet others;
    for (MechanismId id : members) {
      if (id != MechanismId::kImprovedDp) others.insert(id);
    }
    const RealMatrix r = ratio_map(grid, MechanismId::kImprovedDp, others);
    for (double v : r.data()) {
      if (std::isfinite(v) && !(v <= peak)) peak = v;
    }
    write(dir, "ratio_improved_dp.csv", matrix_csv(grid, r), written);
    if (c.render) {
      write(dir, "ratio_improved_dp.svg",
            svg::heatmap(grid, r,
                         "improved_dp / max(" + others.to_string() + ")", &map),
            written);
    }
  }
  nlohmann::ordered_json j;
  j["command"] = "sweep";
  j["mode"] = to_string(mode);
  j["sigma"] = c.sigma;
  j["resolution"] = c.resolution;
  j["mechanisms"] = set.to_string();
  if (!std::isnan(peak)) j["peak_improved_dp_ratio"] = peak;
  j["files"] = written;
  out << j.dump() << '\n';
  return 0;
}

inline int run_dataset(const RunConfig& c, std::ostream& out,
                       std::ostream& err) {
  IngestResult in = ingest_evidence(c.input);
  for (const std::string& w : in.warnings) err << "warning: " << w << '\n';
  if (c.mode && *c.mode != in.mode) {
    throw ValidationError("--mode " + std::string(to_string(*c.mode)) +
                          " does not match the " +
                          std::string(to_string(in.mode)) + " input file");
  }
  const EnsembleConfig cfg = [&] {
    try {
      return c.ensemble(in.mode);
    } catch (const ValidationError& e) {
      throw UsageError(std::string("--mechanisms: ") + e.what());
    }
  }();
  certify_records(in.records, c.alpha, NoiseConfig::create(c.sigma), cfg,
                  c.optimizer());
  std::vector<std::string> written;
  emit_dataset(c, in.records, written, err);
  nlohmann::ordered_json j;
  j["command"] = "dataset";
  j["mode"] = to_string(in.mode);
  j["samples"] = in.records.size();
  j["files"] = written;
  out << j.dump() << '\n';
  return 0;
}

inline int run_simulate(const RunConfig& c, std::ostream& out,
                        std::ostream& err) {
  const SyntheticClassifier model =
      c.probabilities.empty() ? SyntheticClassifier::linear(c.weights, c.offset)
                              : SyntheticClassifier::fixed(c.probabilities);
  const SimulationRun run =
      SimulationRun::create(c.seed, c.n, c.n0, c.sigma, c.alpha);
  const ExpectationMode mode = c.effective_mode();
  const std::vector<double> truth = smoothed_truth(model, c.point, c.sigma);
  const int true_class = static_cast<int>(
      std::max_element(truth.begin(), truth.end()) - truth.begin());
  const EnsembleConfig cfg =
      c.algorithm == Algorithm::kBinomial
          ? EnsembleConfig::create(MechanismSet{MechanismId::kCohen}, mode)
          : c.ensemble(mode);
  const OptimizerSettings opt = c.optimizer();

  std::vector<SampleRecord> records(c.replicates);
  parallel_for(c.replicates, [&](std::size_t i) {
    const auto index = static_cast<std::uint32_t>(i);
    SampleRecord& rec = records[i];
    rec.sample_id = "rep" + std::to_string(i);
    rec.label = true_class;
    switch (c.algorithm) {
      case Algorithm::kMultinomial:
        rec.counts = count_draws(model, c.point, run, index);
        break;
      case Algorithm::kSoftmax:
        rec.sums = softmax_sums(model, c.point, run, index);
        break;
      case Algorithm::kBinomial: {
        const BinomialCertificate cert =
            binomial_certify_original_detailed(model, c.point, run, index);
        rec.bounds = cert.bounds;
        rec.outcome = cert.outcome;
        return;
      }
    }
    certify_record(rec, c.alpha, run.noise(), cfg, opt);
  });

  std::vector<std::string> written;
  const std::filesystem::path dir(c.output);
  if (c.algorithm != Algorithm::kBinomial) {
    write(dir, "evidence.csv", evidence_csv(records, mode), written);
  }
  emit_dataset(c, records, written, err);

  std::size_t abstained = 0;
  for (const SampleRecord& rec : records) abstained += rec.outcome->abstained();
  nlohmann::ordered_json j;
  j["command"] = "simulate";
  j["mode"] = to_string(mode);
  j["replicates"] = c.replicates;
  j["true_class"] = true_class;
  j["truth"] = truth;
  j["abstention_rate"] =
      static_cast<double>(abstained) / static_cast<double>(records.size());
  j["files"] = written;
  out << j.dump() << '\n';
  return 0;
}

inline int run_analyze(const RunConfig& c, std::ostream& out,
                       std::ostream& err) {
  std::vector<SampleRecord> records = ingest_samples(c.input);
  std::vector<std::string> written;
  const std::filesystem::path dir(c.output);
  if (records.empty()) {
    err << "warning: " << c.input << " has no samples\n";
  } else {
    const DatasetSummary s =
        summarize(records, c.threshold, c.baseline_for(records));
    write(dir, "summary.csv", summary_csv(s), written);
    const bool labelled =
        std::all_of(records.begin(), records.end(),
                    [](const SampleRecord& r) { return r.label.has_value(); });
    if (labelled) {
      const std::vector<double> radii = curve_radii(records);
      std::vector<RadiusField> fields;
      for (MechanismId id : s.mechanisms.members()) fields.push_back(id);
      fields.push_back(std::nullopt);
      std::vector<std::vector<CurvePoint>> curves;
      for (RadiusField f : fields) {
        curves.push_back(certified_accuracy_curve(records, radii, f));
      }
      write(dir, "curve.csv", curve_csv(radii, fields, curves), written);
      if (c.render) {
        write(dir, "curve.svg",
              svg::accuracy_curves(fields, curves, "Certified accuracy"),
              written);
      }
    }
    if (c.render) {
      write(
          dir, "scatter.svg",
          svg::sample_scatter(records, s.mechanisms, "Samples on the simplex"),
          written);
    }
  }
  nlohmann::ordered_json j;
  j["command"] = "analyze";
  j["samples"] = records.size();
  j["files"] = written;
  out << j.dump() << '\n';
  return 0;
}

}  // namespace internal

inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  switch (c.command) {
    case Command::kCertify:
      return internal::run_certify(c, out);
    case Command::kSweep:
      return internal::run_sweep(c, out);
    case Command::kDataset:
      return internal::run_dataset(c, out, err);
    case Command::kSimulate:
      return internal::run_simulate(c, out, err);
    case Command::kAnalyze:
      return internal::run_analyze(c, out, err);
  }
  return 1;
}

// Exit codes: 0 success, 1 usage, 2 data, 3 numeric failure.
inline int main_entry(int argc, const char* const* argv, std::ostream& out,
                      std::ostream& err) {
  try {
    const std::optional<RunConfig> config = parse_args(argc, argv, out);
    if (!config) return 0;
    return run(*config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace simplexcert::cli

#endif  // SIMPLEXCERT_CLI_HPP_
