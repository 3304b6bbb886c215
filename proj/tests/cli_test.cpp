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

#include "simplexcert/cli.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"

namespace simplexcert::cli {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "simplexcert");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code =
      main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "simplexcert");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  return *parse_args(static_cast<int>(argv.size()), argv.data(), out);
}

class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(fs::temp_directory_path() / name) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string operator/(const std::string& leaf) const {
    return (path_ / leaf).string();
  }

 private:
  fs::path path_;
};

TEST(ParseArgsTest, Defaults) {
  const RunConfig c = parse({"certify", "--e0", "0.9", "--e1", "0.05"});
  EXPECT_EQ(c.command, Command::kCertify);
  EXPECT_EQ(c.sigma, 1.0);
  EXPECT_EQ(c.alpha, 0.001);
  EXPECT_EQ(c.n, 100000);
  EXPECT_EQ(c.effective_mode(), ExpectationMode::kMultinomial);
  EXPECT_EQ(c.ensemble(c.effective_mode()).enabled(), MechanismSet::all());
}

TEST(ParseArgsTest, HelpListsDefaults) {
  const Invocation r = invoke({"simulate", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--sigma FLOAT [1]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("--alpha FLOAT [0.001]"), std::string::npos);
  EXPECT_NE(r.out.find("--n INT [100000]"), std::string::npos);
}

TEST(ParseArgsTest, UsageErrors) {
  for (const std::vector<std::string>& args :
       std::vector<std::vector<std::string>>{
           {"certify", "--e0", "0.9", "--e1", "0.05", "--alpha", "0"},
           {"certify", "--e0", "0.9", "--e1", "0.05", "--sigma", "-1"},
           {"certify", "--e0", "0.9"},
           {"certify", "--e0", "0.9", "--e1", "0.05", "--bogus"},
           {"certify", "--e0", "0.9", "--e1", "0.05", "--mechanisms", "foo"},
           {"certify", "--e0", "0.9", "--e1", "0.05", "--mode", "softmax",
            "--mechanisms", "cohen"},
           {"sweep", "--resolution", "1", "--out", "x"},
           {"sweep"},
           {"simulate", "--out", "x"},
           {"simulate", "--out", "x", "--p", "0.5,0.5", "--algorithm", "nope"},
           {},
       }) {
    const Invocation r = invoke(args);
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_NE(r.err.find("error:"), std::string::npos);
  }
}

TEST(CertifyCommandTest, PrintsOneJsonLine) {
  const Invocation r = invoke({"certify", "--e0", "0.9", "--e1", "0.05",
                               "--sigma", "1", "--mode", "multinomial"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  const auto j = nlohmann::json::parse(r.out);
  const ExpectationBounds b =
      make_bounds(0.9, 0.05, ExpectationMode::kMultinomial);
  const NoiseConfig noise = NoiseConfig::create(1.0);
  EXPECT_EQ(j["radii"]["cohen"].get<double>(), certify_cohen(b, noise));
  EXPECT_EQ(j["radii"]["improved_dp"].get<double>(),
            certify_improved_dp(b, noise));
  EXPECT_EQ(j["best"], "cohen");
  EXPECT_EQ(j["abstained"], false);
}

TEST(CertifyCommandTest, CountsAndSums) {
  const Invocation counts = invoke({"certify", "--counts", "50,50"});
  ASSERT_EQ(counts.code, 0) << counts.err;
  const auto jc = nlohmann::json::parse(counts.out);
  EXPECT_EQ(jc["abstained"], true);
  EXPECT_TRUE(jc["best"].is_null());
  EXPECT_NEAR(jc["e0"].get<double>(), 0.3355819371905234, 1e-12);

  const Invocation sums =
      invoke({"certify", "--sums", "90000,10000", "--n", "100000"});
  ASSERT_EQ(sums.code, 0) << sums.err;
  const auto js = nlohmann::json::parse(sums.out);
  EXPECT_EQ(js["mode"], "softmax");
  EXPECT_FALSE(js["radii"].contains("cohen"));
  EXPECT_NEAR(js["e0"].get<double>(), 0.9 - 0.00616477998777818605, 1e-15);
}

TEST(SweepCommandTest, WritesGridFiles) {
  TempDir dir("simplexcert_cli_sweep");
  const Invocation r = invoke({"sweep", "--resolution", "12", "--sigma", "1",
                               "--out", dir.path().string(), "--render"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* name :
       {"cohen.csv", "li.csv", "lecuyer.csv", "improved_dp.csv", "region.csv",
        "boundaries.csv", "diff_cohen_li.csv", "ratio_improved_dp.csv",
        "region.svg", "improved_dp.svg"}) {
    EXPECT_TRUE(fs::exists(dir.path() / name)) << name;
  }
  const std::string svg = read_text_file(dir.path() / "region.svg");
  EXPECT_EQ(svg.rfind("<svg xmlns", 0), 0u);
  EXPECT_EQ(svg.find("href"), std::string::npos);
}

TEST(DatasetCommandTest, DeterministicOutputs) {
  TempDir dir("simplexcert_cli_dataset");
  write_text_file(dir / "counts.csv",
                  "sample_id,label,n,c0,c1,c2\n"
                  "a,0,100000,99000,600,400\n"
                  "b,1,100000,30000,40000,30000\n"
                  "c,2,100000,20000,20000,60000\n");
  auto run_once = [&](const std::string& out) {
    const Invocation r = invoke({"dataset", "--input", dir / "counts.csv",
                                 "--out", dir / out, "--render"});
    EXPECT_EQ(r.code, 0) << r.err;
  };
  run_once("one");
  run_once("two");
  for (const char* name : {"samples.csv", "summary.csv", "curve.csv",
                           "curve.svg", "scatter.svg"}) {
    EXPECT_EQ(read_text_file(dir.path() / "one" / name),
              read_text_file(dir.path() / "two" / name))
        << name;
  }
  const Invocation analyze = invoke(
      {"analyze", "--input", dir / "one/samples.csv", "--out", dir / "three"});
  EXPECT_EQ(analyze.code, 0) << analyze.err;
  EXPECT_TRUE(fs::exists(dir.path() / "three" / "summary.csv"));
}

TEST(DatasetCommandTest, DataErrorsExitTwo) {
  TempDir dir("simplexcert_cli_bad");
  write_text_file(dir / "bad.csv",
                  "sample_id,label,n,c0,c1\na,0,10,5,5\nb,0,10,5,6\n");
  const Invocation r =
      invoke({"dataset", "--input", dir / "bad.csv", "--out", dir / "o"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":3:"), std::string::npos) << r.err;

  write_text_file(dir / "empty.csv", "");
  const Invocation empty =
      invoke({"dataset", "--input", dir / "empty.csv", "--out", dir / "e"});
  EXPECT_EQ(empty.code, 0) << empty.err;
  EXPECT_NE(empty.err.find("warning"), std::string::npos);

  const Invocation missing =
      invoke({"analyze", "--input", dir / "nope.csv", "--out", dir / "m"});
  EXPECT_EQ(missing.code, 1);
}

TEST(SimulateCommandTest, SeededRunsRepeat) {
  TempDir dir("simplexcert_cli_simulate");
  auto run = [&](const std::string& out, const std::string& seed) {
    const Invocation r =
        invoke({"simulate", "--p", "0.6,0.3,0.1", "--n", "2000", "--replicates",
                "20", "--seed", seed, "--out", dir / out});
    EXPECT_EQ(r.code, 0) << r.err;
    return read_text_file(dir.path() / out / "evidence.csv");
  };
  EXPECT_EQ(run("a", "5"), run("b", "5"));
  EXPECT_NE(run("a", "5"), run("c", "6"));

  const Invocation binomial =
      invoke({"simulate", "--weights", "1,1", "--point", "0.5,0.2", "--sigma",
              "0.5", "--algorithm", "binomial", "--n", "2000", "--replicates",
              "5", "--out", dir / "bin"});
  ASSERT_EQ(binomial.code, 0) << binomial.err;
  const auto j = nlohmann::json::parse(binomial.out);
  EXPECT_EQ(j["true_class"], 0);
  EXPECT_NEAR(j["truth"][0].get<double>(),
              std_normal_cdf(0.7 / std::sqrt(2.0) / 0.5), 1e-12);
}

}  // namespace
}  // namespace simplexcert::cli
