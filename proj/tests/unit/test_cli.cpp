// Copyright 2026 The mtlbench Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <locale>
#include <sstream>

#include "mtlbench/cli/config.hpp"
#include "mtlbench/cli/dispatch.hpp"
#include "mtlbench/cli/emit.hpp"
#include "mtlbench/core/errors.hpp"
#include "mtlbench/data/csv.hpp"
#include "mtlbench/experiments/experiments.hpp"

namespace mtlbench {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mtlbench_test_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

const char* const kTinyConfig = R"(# small and fast
[data]
counts = 120, 60, 60   # resistivity, hardness, amorphous
relatedness = 0.5

[train]
max_epochs = 2
seeds = 1, 2
workers = 1
)";

TEST(Config, ParsesSectionsListsAndComments) {
  const RunConfig c = parse_config(kTinyConfig);
  EXPECT_EQ(c.data.synthetic.counts, (std::vector<Index>{120, 60, 60}));
  EXPECT_EQ(c.data.synthetic.relatedness, 0.5);
  EXPECT_EQ(c.train.max_epochs, 2);
  EXPECT_EQ(c.train.seeds, (std::vector<std::uint64_t>{1, 2}));
  EXPECT_EQ(c.train.learning_rate, 1e-3);
}

TEST(Config, DefaultsMatchTheTrainingProtocol) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.train.batch_size, 32);
  EXPECT_EQ(c.train.max_epochs, 200);
  EXPECT_EQ(c.train.early_stop_patience, 30);
  EXPECT_EQ(c.train.weight_decay, 1e-5);
  EXPECT_EQ(c.train.seeds, (std::vector<std::uint64_t>{42, 123, 456, 789, 1024}));
  EXPECT_EQ(c.train.regularization.lambda1, 0.01);
  EXPECT_EQ(c.train.regularization.lambda2, 0.1);
  EXPECT_EQ(c.train.architecture.alpha, 0.1);
  EXPECT_EQ(c.train.architecture.dropout, 0.3);
}

TEST(Config, CanonicalTextRoundTrips) {
  RunConfig c = parse_config(kTinyConfig);
  apply_override(c, "model.alpha=0.25");
  apply_override(c, "experiment.models=standard_mtl,structured_mtl");
  const std::string text = to_config_text(c);
  const RunConfig back = parse_config(text);
  EXPECT_EQ(to_config_text(back), text);
  EXPECT_EQ(back.train, c.train);
  EXPECT_EQ(back.experiment.models, c.experiment.models);
}

TEST(Config, ErrorsCarryLineNumbers) {
  try {
    (void)parse_config("[train]\nmax_epochs = 3\nmystery = 1\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_config("[train]\nseeds = 1\nseeds = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("[nowhere]\n"), ConfigError);
  EXPECT_THROW(parse_config("max_epochs = 3\n"), ConfigError);
  EXPECT_THROW(parse_config("[train]\nmax_epochs = three\n"), ConfigError);
  EXPECT_THROW(parse_config("[train]\nscale_targets = yes\n"), ConfigError);
}

TEST(Config, OverridesAndValidation) {
  RunConfig c;
  apply_override(c, "train.lambda1=0");
  EXPECT_EQ(c.train.regularization.lambda1, 0.0);
  EXPECT_THROW(apply_override(c, "train.lambda1"), ConfigError);
  EXPECT_THROW(apply_override(c, "bogus.key=1"), ConfigError);
  apply_override(c, "data.split_train=0.9");
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Emit, WritesEveryStudyFile) {
  const fs::path dir = scratch_dir("emit");
  ExperimentOptions o;
  o.train = parse_config(kTinyConfig).train;
  SyntheticSpec spec;
  spec.counts = {120, 60, 60};
  const Dataset ds = generate_synthetic(spec);
  const ExperimentReport r = run_main_comparison(ds, o);
  const auto written = emit_report(r, {"json", "csv"}, dir);
  for (const char* name : {"report.json", "metrics.csv", "records.csv", "ttests.csv", "relations.csv"}) {
    EXPECT_TRUE(fs::exists(dir / name)) << name;
  }
  EXPECT_EQ(lines_of(dir / "metrics.csv").front(), "task,model,metric,mean,std,n_seeds");
  EXPECT_EQ(lines_of(dir / "metrics.csv").size(), r.aggregates.size() + 1);
  EXPECT_EQ(report_from_json(read_file(dir / "report.json")), r);

  (void)emit_plot_data(r, dir / "plot");
  EXPECT_EQ(lines_of(dir / "plot" / "confusion.csv").front(), "model,task,seed,true_label,predicted_label,count");
  // Confusion counts per (model, seed) sum to the classification test size.
  std::map<std::string, Index> totals;
  for (const auto& line : lines_of(dir / "plot" / "confusion.csv")) {
    if (line.rfind("model,", 0) == 0) continue;
    std::stringstream ss(line);
    std::string model, task, seed, t, p, count;
    std::getline(ss, model, ',');
    std::getline(ss, task, ',');
    std::getline(ss, seed, ',');
    std::getline(ss, t, ',');
    std::getline(ss, p, ',');
    std::getline(ss, count, ',');
    totals[model + "/" + seed] += std::stoll(count);
  }
  const Index test_size = split_counts(60, {})[2];
  ASSERT_FALSE(totals.empty());
  for (const auto& [key, total] : totals) EXPECT_EQ(total, test_size) << key;
  EXPECT_TRUE(fs::exists(dir / "plot" / "training_curves.csv"));
  EXPECT_FALSE(fs::exists(dir / "plot" / "sweep_curve.csv"));
}

TEST(Emit, CosineMatrixAndSweepCurveSchemas) {
  const fs::path dir = scratch_dir("cosine");
  ExperimentReport r;
  r.experiment = "conflict";
  r.task_names = {"a", "b"};
  r.task_kinds = {TaskKind::kRegression, TaskKind::kRegression};
  r.cosines = {{"a", "a", 1.0, 0.0, 4}, {"a", "b", 0.01, 0.2, 4}, {"b", "b", 1.0, 0.0, 4}};
  SweepPoint p;
  p.majority_count = 100;
  p.ratio = 1.25;
  p.minority_task = "b";
  p.aggregates = {{"b", "standard_mtl", "r2", 0.5, 0.1, 5}};
  r.sweep = {p};
  (void)emit_plot_data(r, dir);
  const auto cos = lines_of(dir / "cosine_matrix.csv");
  ASSERT_EQ(cos.size(), 3u);
  EXPECT_EQ(cos[1].substr(0, 4), "a,1,");
  EXPECT_EQ(lines_of(dir / "sweep_curve.csv").front(), "majority_count,ratio,r2_mean,r2_std");
  EXPECT_EQ(lines_of(dir / "sweep_curve.csv")[1], "100,1.25,0.5,0.1");
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

TEST(Emit, LocaleIndependentNumbers) {
  const std::locale previous = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  EXPECT_EQ(format_double(12345.5), "12345.5");
  std::locale::global(previous);
}

TEST(Emit, RunDirectoriesNeverCollide) {
  const fs::path root = scratch_dir("rundir");
  const fs::path a = make_run_directory(root, "compare");
  const fs::path b = make_run_directory(root, "compare");
  EXPECT_NE(a, b);
  EXPECT_TRUE(fs::is_directory(a));
  EXPECT_TRUE(fs::is_directory(b));
  EXPECT_EQ(a.filename().string().rfind("compare-", 0), 0u);
}

int dispatch(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  args.insert(args.begin(), "mtlbench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_dispatch(int(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

TEST(Dispatch, ExitCodes) {
  const fs::path dir = scratch_dir("exit");
  EXPECT_EQ(dispatch({}), kExitUsage);
  EXPECT_EQ(dispatch({"nonsense"}), kExitUsage);
  EXPECT_EQ(dispatch({"--help"}), kExitSuccess);
  EXPECT_EQ(dispatch({"compare", "--config", (dir / "missing.cfg").string()}), kExitUsage);
  EXPECT_EQ(dispatch({"compare", "--set", "train.nope=1"}), kExitUsage);
  EXPECT_EQ(dispatch({"sweep", "--out", dir.string()}), kExitUsage);
  // Unreadable CSV data is a runtime failure.
  EXPECT_EQ(dispatch({"compare", "--set", "data.source=csv", "--set",
                      "data.csv=" + (dir / "absent.csv").string(), "--out", dir.string()}),
            kExitFailure);
}

TEST(Dispatch, GradcheckReportsPass) {
  std::string out;
  EXPECT_EQ(dispatch({"gradcheck"}, &out), kExitSuccess);
  EXPECT_NE(out.find("gradcheck PASS"), std::string::npos) << out;
  EXPECT_NE(out.find("structured_mtl: max relative error"), std::string::npos);
}

TEST(Dispatch, CompareIsDeterministicAndHonorsEnvironment) {
  const fs::path dir = scratch_dir("compare");
  std::ofstream(dir / "tiny.cfg") << kTinyConfig;
  ::setenv("MTLBENCH_OUT", (dir / "env").string().c_str(), 1);
  std::string out;
  ASSERT_EQ(dispatch({"compare", "--config", (dir / "tiny.cfg").string(), "--quiet"}, &out), kExitSuccess);
  ASSERT_EQ(dispatch({"compare", "--config", (dir / "tiny.cfg").string(), "--quiet"}), kExitSuccess);
  ::unsetenv("MTLBENCH_OUT");
  std::vector<fs::path> runs;
  for (const auto& entry : fs::directory_iterator(dir / "env")) runs.push_back(entry.path());
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(read_file(runs[0] / "metrics.csv"), read_file(runs[1] / "metrics.csv"));
  const ExperimentReport report = report_from_json(read_file(runs[0] / "report.json"));
  EXPECT_EQ(to_config_text(parse_config(report.config_snapshot)), report.config_snapshot);
  EXPECT_NE(out.find("run directory:"), std::string::npos);
}

TEST(Dispatch, SynthWritesLoadableCsv) {
  const fs::path dir = scratch_dir("synth");
  ASSERT_EQ(dispatch({"synth", "--config", "/dev/null", "--set", "data.counts=30,10,12", "--file",
                      (dir / "s.csv").string()}),
            kExitSuccess);
  const Dataset ds = load_csv(dir / "s.csv", CsvSchema::load(dir / "s.csv.schema"));
  EXPECT_EQ(ds.size(), 52);
  // The emitted CSV feeds straight back into an experiment.
  EXPECT_EQ(dispatch({"compare", "--set", "data.source=csv", "--set", "data.csv=" + (dir / "s.csv").string(),
                      "--set", "data.schema=" + (dir / "s.csv.schema").string(), "--set", "train.max_epochs=1",
                      "--seeds", "3", "--set", "experiment.models=standard_mtl", "--out", dir.string(), "--quiet"}),
            kExitSuccess);
}

TEST(Dispatch, ExecutableExitCode) {
  const std::string cmd = std::string(MTLBENCH_CLI_PATH) + " bogus >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kExitUsage);
}

}  // namespace
}  // namespace mtlbench
