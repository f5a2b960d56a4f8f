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

// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--only 1,2,...] [--known-red 7,9]
//
// Exits non-zero when any criterion fails, except criteria listed with
// --known-red, which still print FAIL but do not change the exit status.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mtlbench/cli/config.hpp"
#include "mtlbench/core/log.hpp"
#include "mtlbench/data/split.hpp"
#include "mtlbench/data/synthetic.hpp"
#include "mtlbench/experiments/experiments.hpp"
#include "mtlbench/loss/losses.hpp"
#include "mtlbench/model/structured.hpp"
#include "mtlbench/stats/metrics.hpp"
#include "mtlbench/stats/ttest.hpp"

namespace fs = std::filesystem;
using namespace mtlbench;

namespace {

// Tolerances and thresholds, one per criterion.
constexpr double kGradTolerance = 1e-4;
constexpr double kGradBudgetSeconds = 30.0;
constexpr double kMaskedLossTolerance = 1e-12;
constexpr double kR2Tolerance = 1e-12;
constexpr double kTTolerance = 0.001;
constexpr double kPTolerance = 0.001;
constexpr double kSplitTolerance = 1.0;
constexpr double kSweepBudgetSeconds = 20.0 * 60.0;
constexpr double kCosineBound = 0.05;
constexpr double kIndependentRelationBound = 0.1;
constexpr double kRelatedRelationFloor = 0.2;
constexpr double kTransferSlack = 0.02;
constexpr double kAggregateTolerance = 1e-12;

// Sweep data: minority total 116 leaves 80 training rows; majority totals
// 116 / 1144 / 7430 leave 80 / 800 / 5200 (ratios 1:1, 10:1, 65:1).
constexpr Index kMinorityTotal = 116;
const std::vector<Index> kMajorityTotals{116, 1144, 7430};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream out;
  out.precision(4);
  out << v;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Captured {
  int status = -1;
  std::string output;
};

Captured run_cli(const std::string& args) {
  Captured c;
  const std::string cmd = std::string(MTLBENCH_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return c;
  std::array<char, 4096> buffer{};
  while (std::fgets(buffer.data(), int(buffer.size()), pipe) != nullptr) c.output += buffer.data();
  const int status = ::pclose(pipe);
  c.status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return c;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double pooled_std(double a, double b) { return std::sqrt(0.5 * (a * a + b * b)); }

SyntheticSpec sweep_spec(double relatedness) {
  SyntheticSpec spec;
  spec.task_names = {"major", "minor"};
  spec.task_kinds = {TaskKind::kRegression, TaskKind::kRegression};
  spec.counts = {kMajorityTotals.back(), kMinorityTotal};
  spec.relatedness = relatedness;
  return spec;
}

ExperimentOptions protocol_options() {
  ExperimentOptions o;  // five seeds, full training protocol
  o.keep_predictions = false;
  o.keep_histories = false;
  return o;
}

const AggregateRow* find_row(const std::vector<AggregateRow>& rows, const std::string& task, const std::string& model,
                             const std::string& metric) {
  for (const auto& r : rows) {
    if (r.task == task && r.model == model && r.metric == metric) return &r;
  }
  return nullptr;
}

Outcome gradient_fidelity() {
  const auto start = std::chrono::steady_clock::now();
  const Captured c = run_cli("gradcheck");
  const double elapsed = seconds_since(start);
  const auto at = c.output.find("gradcheck PASS: max relative error ");
  double worst = std::numeric_limits<double>::infinity();
  const auto key = c.output.find("max relative error ", c.output.find("gradcheck "));
  if (key != std::string::npos) worst = std::strtod(c.output.c_str() + key + 19, nullptr);
  return {c.status == 0 && at != std::string::npos && worst < kGradTolerance && elapsed < kGradBudgetSeconds,
          "max relative error " + num(worst) + " (< " + num(kGradTolerance) + "), " + num(elapsed) + " s"};
}

Outcome masked_loss_equivalence() {
  const Dataset ds = generate_synthetic(SyntheticSpec{});
  auto model = make_model(ModelKind::kShared, ds.task_kinds(), {}, 42);
  const Matrix preds = model->forward(ds.features(), Mode::kEval);  // full batch
  double worst = 0.0;
  for (std::size_t t = 0; t < ds.num_tasks(); ++t) {
    const LossKind kind = loss_kind_for(ds.task_kinds()[t]);
    const MaskedLoss full = masked_loss(preds.col(Index(t)), ds.targets().col(Index(t)), ds.mask().col(Index(t)), kind);
    const auto rows = ds.labeled_rows(t);
    Vector p(Index(rows.size())), y(Index(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      p(Index(k)) = preds(rows[k], Index(t));
      y(Index(k)) = ds.targets()(rows[k], Index(t));
    }
    const MaskedLoss plain = masked_loss(p, y, Vector::Ones(p.size()), kind);
    worst = std::max(worst, std::abs(full.value - plain.value));
  }
  return {worst <= kMaskedLossTolerance, "max |union - subset| = " + num(worst)};
}

Outcome zero_alpha_limit() {
  const Dataset ds = generate_synthetic(SyntheticSpec{});
  ArchitectureConfig arch;
  arch.alpha = 0.0;
  StructuredMTLModel structured(ds.task_kinds(), arch, 42);
  const Matrix fused = structured.forward(ds.features(), Mode::kEval);
  const Matrix plain = structured.shared().forward(ds.features(), Mode::kEval);
  const bool identical = fused.rows() == plain.rows() && fused.cols() == plain.cols() &&
                         std::memcmp(fused.data(), plain.data(), sizeof(double) * std::size_t(fused.size())) == 0;
  return {identical, identical ? "bit-identical over " + std::to_string(ds.size()) + " rows" : "predictions differ"};
}

Outcome metric_oracles() {
  Vector labels(4), probs(4);
  labels << 1, 0, 1, 0;
  probs << 0.9, 0.8, 0.4, 0.1;
  const ClassificationMetrics c = classification_metrics(probs, labels);
  Vector p(3), y(3);
  p << 1, 2, 3;
  y << 1, 2, 4;
  const RegressionMetrics r = regression_metrics(p, y);
  const bool pass = c.accuracy == 0.5 && c.f1 == 0.5 && c.recall == 0.5 && c.auc == 0.75 &&
                    std::abs(r.r2 - 11.0 / 14.0) <= kR2Tolerance;
  return {pass, "accuracy " + num(c.accuracy) + ", f1 " + num(c.f1) + ", recall " + num(c.recall) + ", auc " +
                    num(c.auc) + ", r2 - 11/14 = " + num(r.r2 - 11.0 / 14.0)};
}

Outcome ttest_oracle() {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 2, 4, 4, 6};
  const TTestResult r = paired_t_test(a, b);
  const bool pass = std::abs(r.t_statistic + 2.449) <= kTTolerance && std::abs(r.p_value - 0.0705) <= kPTolerance &&
                    r.degrees_of_freedom == 4;
  return {pass, "t " + num(r.t_statistic) + ", df " + std::to_string(r.degrees_of_freedom) + ", p " + num(r.p_value)};
}

Outcome split_reproduction() {
  SyntheticSpec spec;
  spec.task_names = {"resistivity"};
  spec.task_kinds = {TaskKind::kRegression};
  spec.counts = {52388};
  const Dataset ds = generate_synthetic(spec);
  const DatasetSplits s = stratified_split(ds, {}, 42);
  const bool pass = std::abs(double(s.train.size()) - 36670.0) <= kSplitTolerance &&
                    std::abs(double(s.validation.size()) - 7859.0) <= kSplitTolerance &&
                    std::abs(double(s.test.size()) - 7859.0) <= kSplitTolerance;
  return {pass, std::to_string(s.train.size()) + " / " + std::to_string(s.validation.size()) + " / " +
                    std::to_string(s.test.size())};
}

Outcome negative_transfer_direction() {
  const auto start = std::chrono::steady_clock::now();
  const Dataset ds = generate_synthetic(sweep_spec(0.0));
  const SweepOptions sweep{"major", "minor", kMajorityTotals, ModelKind::kShared};
  const ExperimentReport r = run_imbalance_sweep(ds, sweep, protocol_options());
  const double elapsed = seconds_since(start);
  std::string detail;
  std::vector<const AggregateRow*> rows;
  for (const SweepPoint& p : r.sweep) {
    rows.push_back(find_row(p.aggregates, "minor", to_string(ModelKind::kShared), "r2"));
    if (rows.back() == nullptr) return {false, "missing minority r2 aggregate"};
    detail += "ratio " + num(p.ratio) + ": r2 " + num(rows.back()->mean) + " +- " + num(rows.back()->std) + "; ";
  }
  const double gap = rows.front()->mean - rows.back()->mean;
  const double pooled = pooled_std(rows.front()->std, rows.back()->std);
  detail += "gap " + num(gap) + " vs pooled std " + num(pooled) + "; " + num(elapsed) + " s";
  return {gap > 0.0 && gap > pooled && elapsed < kSweepBudgetSeconds, detail};
}

Outcome gradient_orthogonality() {
  const Dataset ds = generate_synthetic(sweep_spec(0.0));
  const ExperimentReport r = run_gradient_conflict(ds, protocol_options(), ModelKind::kShared);
  bool pass = !r.cosines.empty();
  std::string detail;
  for (const CosineStat& c : r.cosines) {
    if (c.task_a == c.task_b) {
      pass = pass && c.mean == 1.0;
      detail += c.task_a + " self " + num(c.mean) + "; ";
    } else {
      pass = pass && c.samples > 0 && std::abs(c.mean) < kCosineBound;
      detail += c.task_a + "/" + c.task_b + " " + num(c.mean) + " +- " + num(c.std) + " (" +
                std::to_string(c.samples) + " samples); ";
    }
  }
  return {pass, detail};
}

double mean_off_diagonal(const std::vector<RelationStat>& relations) {
  double total = 0.0;
  int count = 0;
  for (const auto& r : relations) {
    if (r.target == r.source) continue;
    total += r.mean;
    ++count;
  }
  return count > 0 ? total / count : std::nan("");
}

Outcome relation_independence() {
  const ExperimentReport unrelated = run_task_relations(generate_synthetic(sweep_spec(0.0)), protocol_options());
  ExperimentOptions no_l1 = protocol_options();
  no_l1.train.regularization.lambda1 = 0.0;
  const ExperimentReport related = run_task_relations(generate_synthetic(sweep_spec(1.0)), no_l1);
  const double independent = mean_off_diagonal(unrelated.relations);
  const double dependent = mean_off_diagonal(related.relations);
  return {independent < kIndependentRelationBound && dependent > kRelatedRelationFloor,
          "rho 0: mean off-diagonal w " + num(independent) + " (< " + num(kIndependentRelationBound) +
              "); rho 1 without L1: " + num(dependent) + " (> " + num(kRelatedRelationFloor) + ")"};
}

Outcome transfer_directionality() {
  std::string detail;
  bool pass = true;
  for (double rho : {1.0, 0.0}) {
    const ExperimentReport r =
        run_transfer_utility(generate_synthetic(sweep_spec(rho)), "major", "minor", protocol_options());
    const AggregateRow* t = find_row(r.aggregates, "minor", "transfer", "r2");
    const AggregateRow* s = find_row(r.aggregates, "minor", "scratch", "r2");
    if (t == nullptr || s == nullptr) return {false, "missing transfer aggregates"};
    if (rho == 1.0) {
      pass = pass && t->mean >= s->mean - kTransferSlack;
    } else {
      pass = pass && t->mean - s->mean <= pooled_std(t->std, s->std);
    }
    detail += "rho " + num(rho) + ": transfer " + num(t->mean) + " +- " + num(t->std) + " vs scratch " +
              num(s->mean) + " +- " + num(s->std) + "; ";
  }
  return {pass, detail};
}

fs::path scratch_root() {
  const fs::path root = fs::temp_directory_path() / "mtlbench_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);
  return root;
}

// Default synthetic data, two seeds and a shortened epoch budget: the
// determinism and bookkeeping properties do not depend on run length.
const char* const kEndToEndConfig = R"([train]
seeds = 42, 123
max_epochs = 20
)";

std::vector<fs::path> end_to_end_runs() {
  static std::vector<fs::path> runs;
  if (!runs.empty()) return runs;
  const fs::path root = scratch_root();
  std::ofstream(root / "run.cfg") << kEndToEndConfig;
  for (int k = 0; k < 2; ++k) {
    const Captured c = run_cli("compare --config " + (root / "run.cfg").string() + " --out " +
                               (root / "runs").string() + " --quiet");
    const auto at = c.output.find("run directory: ");
    if (c.status != 0 || at == std::string::npos) return {};
    std::string dir = c.output.substr(at + 15);
    dir.erase(dir.find_last_not_of("\r\n") + 1);
    runs.emplace_back(dir);
  }
  return runs;
}

Outcome end_to_end_determinism() {
  const auto runs = end_to_end_runs();
  if (runs.size() != 2) return {false, "compare run failed"};
  const std::string a = read_file(runs[0] / "metrics.csv");
  const std::string b = read_file(runs[1] / "metrics.csv");
  return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

Outcome report_self_consistency() {
  const auto runs = end_to_end_runs();
  if (runs.empty()) return {false, "compare run failed"};
  const ExperimentReport r = report_from_json(read_file(runs[0] / "report.json"));
  double worst = 0.0;
  std::size_t checked = 0;
  for (const AggregateRow& row : r.aggregates) {
    const auto values = group_values(r.records, row.task, row.model, row.metric);
    if (Index(values.size()) != row.n_seeds) return {false, "seed count mismatch for " + row.task + "/" + row.metric};
    const double dm = std::abs(row.mean - sample_mean(values));
    const double ds = std::abs(row.std - sample_std(values));
    if (!std::isfinite(row.mean)) continue;  // undefined metric on every seed
    worst = std::max({worst, dm, ds});
    ++checked;
  }
  return {checked > 0 && worst <= kAggregateTolerance,
          std::to_string(checked) + " aggregates, max deviation " + num(worst)};
}

std::set<int> parse_set(const std::string& text) {
  std::set<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::string only, known_red;
  app.add_option("--only", only, "Comma-separated criteria to run");
  app.add_option("--known-red", known_red, "Criteria expected to fail; they do not affect the exit status");
  CLI11_PARSE(app, argc, argv);
  const std::set<int> selected = parse_set(only);
  const std::set<int> red = parse_set(known_red);
  warnings_enabled() = false;

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient fidelity", gradient_fidelity},
      {"masked-loss equivalence", masked_loss_equivalence},
      {"zero-alpha limit", zero_alpha_limit},
      {"metric oracles", metric_oracles},
      {"t-test oracle", ttest_oracle},
      {"split reproduction", split_reproduction},
      {"negative-transfer direction", negative_transfer_direction},
      {"gradient orthogonality", gradient_orthogonality},
      {"task-relation independence", relation_independence},
      {"transfer-utility directionality", transfer_directionality},
      {"end-to-end determinism", end_to_end_determinism},
      {"report self-consistency", report_self_consistency}};

  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = int(k) + 1;
    if (!selected.empty() && selected.count(id) == 0) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const bool is_red = red.count(id) > 0;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << criteria[k].first << "): " << o.detail
              << (!o.pass && is_red ? " [known red]" : "") << std::endl;
    if (!o.pass && !is_red) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
