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

#include "mtlbench/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/log.hpp"
#include "mtlbench/experiments/runner.hpp"
#include "mtlbench/model/independent.hpp"
#include "mtlbench/stats/metrics.hpp"
#include "mtlbench/train/evaluate.hpp"
#include "mtlbench/train/transfer.hpp"

namespace mtlbench {
namespace {

struct Prepared {
  DatasetSplits splits;
  PreparedSplits data;
};

Prepared prepare(const Dataset& dataset, const ExperimentOptions& options, std::uint64_t split_seed) {
  Prepared p;
  p.splits = stratified_split(dataset, options.ratios, split_seed);
  p.data = prepare_splits(p.splits, options.train.scale_targets);
  return p;
}

ExperimentReport start_report(const std::string& experiment, const Dataset& dataset,
                              const ExperimentOptions& options) {
  options.train.validate();
  ExperimentReport report;
  report.experiment = experiment;
  report.provenance.started = utc_timestamp();
  report.provenance.seeds = options.train.seeds;
  report.task_names = dataset.task_names();
  report.task_kinds = dataset.task_kinds();
  return report;
}

/// Per-seed output of one or more trained models.
struct SeedOutcome {
  std::vector<MetricRecord> records;
  std::vector<PredictionDump> predictions;
  std::vector<HistoryDump> histories;
  std::optional<Matrix> relations;
  std::vector<std::vector<double>> cosines;  // per pair slot
};

void score(SeedOutcome& out, Model& model, const PreparedSplits& data, Index output, std::size_t column,
           const std::string& model_name, std::uint64_t seed, bool keep_predictions) {
  const TaskKind kind = data.test.task_kinds()[column];
  const std::string& task = data.test.task_names()[column];
  TaskPredictions tp = task_predictions(model, data.test, output, column, data.target_scaling);
  for (const auto& [metric, value] : task_metrics(kind, tp.predictions, tp.targets)) {
    out.records.push_back(MetricRecord{task, model_name, seed, metric, value});
  }
  if (keep_predictions) {
    out.predictions.push_back(PredictionDump{
        model_name, task, seed, tp.rows, std::vector<double>(tp.predictions.data(), tp.predictions.data() + tp.predictions.size()),
        std::vector<double>(tp.targets.data(), tp.targets.data() + tp.targets.size())});
  }
}

void merge(ExperimentReport& report, std::vector<SeedOutcome>& outcomes, const ExperimentOptions& options) {
  for (auto& o : outcomes) {
    report.records.insert(report.records.end(), o.records.begin(), o.records.end());
    if (options.keep_predictions) {
      report.predictions.insert(report.predictions.end(), o.predictions.begin(), o.predictions.end());
    }
    if (options.keep_histories) {
      report.histories.insert(report.histories.end(), o.histories.begin(), o.histories.end());
    }
  }
}

/// Paired t-tests of `reference` against every other model, per task and metric.
void add_ttests(ExperimentReport& report, const std::string& reference, const std::vector<std::string>& others) {
  if (report.provenance.seeds.size() < 2) {
    report.warnings.push_back("fewer than two seeds; paired t-tests skipped");
    log_warning(report.warnings.back());
    return;
  }
  std::vector<std::pair<std::string, std::string>> task_metric;
  for (const AggregateRow& a : report.aggregates) {
    if (a.model != reference) continue;
    task_metric.emplace_back(a.task, a.metric);
  }
  for (const auto& [task, metric] : task_metric) {
    const auto a = group_values(report.records, task, reference, metric);
    for (const std::string& other : others) {
      const auto b = group_values(report.records, task, other, metric);
      if (b.empty() || a.size() != b.size()) continue;
      report.ttests.push_back(TTestRow{task, metric, reference, other, paired_t_test(a, b)});
    }
  }
}

void finish(ExperimentReport& report) {
  std::vector<std::string> notes;
  if (!report.records.empty()) report.aggregates = aggregate_seeds(report.records, &notes);
  report.warnings.insert(report.warnings.end(), notes.begin(), notes.end());
  report.provenance.finished = utc_timestamp();
}

Vector flat_gradient(Model& model) {
  const auto params = model.backbone_parameters();
  Index total = 0;
  for (const auto& p : params) total += p.parameter->size();
  Vector out(total);
  Index offset = 0;
  for (const auto& p : params) {
    const auto& g = p.parameter->grad;
    out.segment(offset, g.size()) = Eigen::Map<const Vector>(g.data(), g.size());
    offset += g.size();
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> conflict_pairs(std::size_t tasks) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < tasks; ++a) {
    for (std::size_t b = a; b < tasks; ++b) pairs.emplace_back(a, b);
  }
  return pairs;
}

std::vector<std::string> model_names(const std::vector<ModelKind>& kinds) {
  std::vector<std::string> names;
  for (ModelKind k : kinds) names.push_back(to_string(k));
  return names;
}

}  // namespace

double gradient_cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ConfigError("gradient_cosine: vectors differ in length");
  const double aa = a.dot(a);
  const double bb = b.dot(b);
  if (aa == 0.0 || bb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return a.dot(b) / std::sqrt(aa * bb);
}

Index total_for_train_count(Index train_count, const SplitRatios& ratios) {
  if (train_count < 1) throw ArgumentError("total_for_train_count: train_count must be at least 1");
  for (Index n = train_count;; ++n) {
    const auto counts = split_counts(n, ratios);
    if (counts[0] == train_count) return n;
    if (counts[0] > train_count) throw ArgumentError("no total yields that training count");
  }
}

ExperimentReport run_main_comparison(const Dataset& dataset, const ExperimentOptions& options) {
  ExperimentReport report = start_report("compare", dataset, options);
  if (dataset.num_tasks() < 2) throw ConfigError("compare: the dataset needs at least two tasks");
  if (options.models.empty()) throw ConfigError("compare: no models selected");
  const Prepared prepared = prepare(dataset, options, options.split_seed);
  report.warnings = prepared.splits.warnings;
  const PreparedSplits& data = prepared.data;
  const TaskBinding binding = TaskBinding::all_tasks(data.train, options.train.task_weights);
  const auto& seeds = options.train.seeds;

  std::vector<SeedOutcome> outcomes =
      parallel_map<SeedOutcome>(seeds.size(), options.train.workers, [&](std::size_t s) {
        const std::uint64_t seed = seeds[s];
        SeedOutcome out;
        for (ModelKind kind : options.models) {
          const std::string name = to_string(kind);
          with_context("compare/" + name + "/seed " + std::to_string(seed), [&] {
            if (kind == ModelKind::kIndependent) {
              for (std::size_t t = 0; t < data.train.num_tasks(); ++t) {
                IndependentModel model(data.train.task_kinds()[t], options.train.architecture, seed);
                TrainHistory h = train(model, data.train.task_subset(t), data.validation.task_subset(t),
                                       TaskBinding::single(t), options.train, seed);
                score(out, model, data, 0, t, name, seed, options.keep_predictions);
                out.histories.push_back(HistoryDump{name + ":" + data.train.task_names()[t], seed, std::move(h)});
              }
              return;
            }
            auto model = make_model(kind, data.train.task_kinds(), options.train.architecture, seed);
            TrainHistory h = train(*model, data.train, data.validation, binding, options.train, seed);
            for (std::size_t t = 0; t < data.train.num_tasks(); ++t) {
              score(out, *model, data, Index(t), t, name, seed, options.keep_predictions);
            }
            if (model->has_relations()) out.relations = model->relation_matrix();
            out.histories.push_back(HistoryDump{name, seed, std::move(h)});
          });
        }
        return out;
      });
  merge(report, outcomes, options);
  finish(report);

  const auto names = model_names(options.models);
  const bool has_structured = std::count(options.models.begin(), options.models.end(), ModelKind::kStructured) > 0;
  const std::string reference = has_structured ? to_string(ModelKind::kStructured) : names.back();
  std::vector<std::string> others;
  for (const auto& n : names) {
    if (n != reference) others.push_back(n);
  }
  add_ttests(report, reference, others);

  std::vector<Matrix> relations;
  for (const auto& o : outcomes) {
    if (o.relations) relations.push_back(*o.relations);
  }
  if (!relations.empty()) report.relations = extract_task_relations(relations, dataset.task_names(), &report.warnings);
  return report;
}

ExperimentReport run_imbalance_sweep(const Dataset& dataset, const SweepOptions& sweep,
                                     const ExperimentOptions& options) {
  ExperimentReport report = start_report("sweep", dataset, options);
  if (sweep.counts.empty()) throw ArgumentError("sweep: no counts given");
  const std::size_t majority = dataset.task_index(sweep.majority_task);
  std::size_t minority = dataset.num_tasks();
  if (!sweep.minority_task.empty()) {
    minority = dataset.task_index(sweep.minority_task);
  } else {
    for (std::size_t t = 0; t < dataset.num_tasks(); ++t) {
      if (t == majority) continue;
      if (minority == dataset.num_tasks() || dataset.label_count(t) < dataset.label_count(minority)) minority = t;
    }
  }
  if (minority == dataset.num_tasks() || minority == majority) {
    throw ArgumentError("sweep: need a minority task distinct from the majority task");
  }
  const Index available = dataset.label_count(majority);
  for (Index c : sweep.counts) {
    if (c < 1 || c > available) {
      throw ArgumentError("sweep: count " + std::to_string(c) + " outside [1, " + std::to_string(available) +
                          "] available " + sweep.majority_task + " samples");
    }
  }

  const std::string model_name = to_string(sweep.model);
  const auto& seeds = options.train.seeds;
  for (Index count : sweep.counts) {
    const Dataset reduced = downsample_task(dataset, majority, count, mix_seed(options.split_seed, std::uint64_t(count)));
    const Prepared prepared = prepare(reduced, options, options.split_seed);
    const PreparedSplits& data = prepared.data;
    report.warnings.insert(report.warnings.end(), prepared.splits.warnings.begin(), prepared.splits.warnings.end());
    const TaskBinding binding = TaskBinding::all_tasks(data.train, options.train.task_weights);

    std::vector<SeedOutcome> outcomes =
        parallel_map<SeedOutcome>(seeds.size(), options.train.workers, [&](std::size_t s) {
          const std::uint64_t seed = seeds[s];
          SeedOutcome out;
          with_context("sweep/" + std::to_string(count) + "/seed " + std::to_string(seed), [&] {
            auto model = make_model(sweep.model, data.train.task_kinds(), options.train.architecture, seed);
            TrainHistory h = train(*model, data.train, data.validation, binding, options.train, seed);
            score(out, *model, data, Index(minority), minority, model_name, seed, options.keep_predictions);
            out.histories.push_back(HistoryDump{model_name + "@" + std::to_string(count), seed, std::move(h)});
          });
          return out;
        });

    SweepPoint point;
    point.majority_count = count;
    point.ratio = double(data.train.label_count(majority)) / double(data.train.label_count(minority));
    point.minority_task = dataset.task_names()[minority];
    for (auto& o : outcomes) point.records.insert(point.records.end(), o.records.begin(), o.records.end());
    point.aggregates = aggregate_seeds(point.records, &report.warnings);
    report.sweep.push_back(std::move(point));
    if (options.keep_histories) {
      for (auto& o : outcomes) report.histories.insert(report.histories.end(), o.histories.begin(), o.histories.end());
    }
  }
  report.provenance.finished = utc_timestamp();
  return report;
}

ExperimentReport run_gradient_conflict(const Dataset& dataset, const ExperimentOptions& options, ModelKind kind) {
  ExperimentReport report = start_report("conflict", dataset, options);
  if (kind == ModelKind::kIndependent) throw ConfigError("conflict: needs a multi-task model");
  if (dataset.num_tasks() < 2) throw ConfigError("conflict: the dataset needs at least two tasks");
  const Prepared prepared = prepare(dataset, options, options.split_seed);
  report.warnings = prepared.splits.warnings;
  const PreparedSplits& data = prepared.data;
  const TaskBinding binding = TaskBinding::all_tasks(data.train, options.train.task_weights);
  const auto pairs = conflict_pairs(dataset.num_tasks());
  const std::string name = to_string(kind);
  const auto& seeds = options.train.seeds;

  std::vector<SeedOutcome> outcomes =
      parallel_map<SeedOutcome>(seeds.size(), options.train.workers, [&](std::size_t s) {
        const std::uint64_t seed = seeds[s];
        SeedOutcome out;
        out.cosines.resize(pairs.size());
        Index eligible_steps = 0;
        TrainHooks hooks;
        hooks.before_backward = [&](Model& model, const StepContext& ctx) {
          std::vector<std::size_t> present;
          for (std::size_t k = 0; k < ctx.losses.size(); ++k) {
            if (!ctx.losses[k].zero_contribution()) present.push_back(k);
          }
          if (present.size() < 2) return;
          if (eligible_steps++ % options.train.conflict_stride != 0) return;
          std::vector<std::optional<Vector>> grads(ctx.losses.size());
          for (std::size_t k : present) {
            model.zero_grad();
            Matrix d = Matrix::Zero(ctx.predictions->rows(), ctx.predictions->cols());
            d.col(Index(k)) = ctx.losses[k].gradient;
            model.backward(d);
            grads[k] = flat_gradient(model);
          }
          for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto& ga = grads[pairs[p].first];
            const auto& gb = grads[pairs[p].second];
            if (!ga || !gb) continue;
            const double c = gradient_cosine(*ga, *gb);
            if (!std::isnan(c)) out.cosines[p].push_back(c);
          }
        };
        with_context("conflict/seed " + std::to_string(seed), [&] {
          auto model = make_model(kind, data.train.task_kinds(), options.train.architecture, seed);
          TrainHistory h = train(*model, data.train, data.validation, binding, options.train, seed, hooks);
          for (std::size_t t = 0; t < data.train.num_tasks(); ++t) {
            score(out, *model, data, Index(t), t, name, seed, options.keep_predictions);
          }
          out.histories.push_back(HistoryDump{name, seed, std::move(h)});
        });
        return out;
      });
  merge(report, outcomes, options);
  finish(report);

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    std::vector<double> pooled;
    for (const auto& o : outcomes) pooled.insert(pooled.end(), o.cosines[p].begin(), o.cosines[p].end());
    CosineStat stat{dataset.task_names()[pairs[p].first], dataset.task_names()[pairs[p].second], 0.0, 0.0,
                    Index(pooled.size())};
    if (pooled.empty()) {
      stat.mean = stat.std = std::numeric_limits<double>::quiet_NaN();
      report.warnings.push_back("no batch contained both " + stat.task_a + " and " + stat.task_b);
      log_warning(report.warnings.back());
    } else {
      stat.mean = sample_mean(pooled);
      stat.std = sample_std(pooled);
    }
    report.cosines.push_back(std::move(stat));
  }
  return report;
}

ExperimentReport run_transfer_utility(const Dataset& dataset, const std::string& source, const std::string& target,
                                      const ExperimentOptions& options) {
  ExperimentReport report = start_report("transfer", dataset, options);
  const std::size_t s_index = dataset.task_index(source);
  const std::size_t t_index = dataset.task_index(target);
  if (dataset.label_count(s_index) == 0 || dataset.label_count(t_index) == 0) {
    throw DataError("transfer: both tasks need labeled samples");
  }
  const Prepared prepared = prepare(dataset, options, options.split_seed);
  report.warnings = prepared.splits.warnings;
  const auto& seeds = options.train.seeds;

  std::vector<SeedOutcome> outcomes =
      parallel_map<SeedOutcome>(seeds.size(), options.train.workers, [&](std::size_t s) {
        const std::uint64_t seed = seeds[s];
        SeedOutcome out;
        with_context("transfer/seed " + std::to_string(seed), [&] {
          TransferOutcome t = pretrain_and_transfer(prepared.data, s_index, t_index, options.train, seed);
          for (auto* arm : {&t.transfer, &t.scratch}) {
            const std::string name = arm == &t.transfer ? "transfer" : "scratch";
            for (const auto& [metric, value] : arm->metrics) {
              out.records.push_back(MetricRecord{target, name, seed, metric, value});
            }
            const auto& tp = arm->test_predictions;
            out.predictions.push_back(PredictionDump{
                name, target, seed, tp.rows,
                std::vector<double>(tp.predictions.data(), tp.predictions.data() + tp.predictions.size()),
                std::vector<double>(tp.targets.data(), tp.targets.data() + tp.targets.size())});
            out.histories.push_back(HistoryDump{name, seed, std::move(arm->history)});
          }
          out.histories.push_back(HistoryDump{"pretrain:" + source, seed, std::move(t.source_history)});
        });
        return out;
      });
  merge(report, outcomes, options);
  finish(report);
  add_ttests(report, "transfer", {"scratch"});
  return report;
}

std::vector<RelationStat> extract_task_relations(std::span<const Matrix> relation_matrices,
                                                 const std::vector<std::string>& task_names,
                                                 std::vector<std::string>* warnings) {
  if (relation_matrices.empty()) throw ArgumentError("extract_task_relations: no trained models");
  const Index tasks = Index(task_names.size());
  for (const Matrix& w : relation_matrices) {
    if (w.rows() != tasks || w.cols() != tasks) throw ConfigError("extract_task_relations: matrix shape mismatch");
  }
  if (relation_matrices.size() == 1) {
    const std::string note = "relations from a single model; std reported as 0";
    log_warning(note);
    if (warnings) warnings->push_back(note);
  }
  std::vector<RelationStat> out;
  for (Index i = 0; i < tasks; ++i) {
    for (Index j = 0; j < tasks; ++j) {
      std::vector<double> values;
      for (const Matrix& w : relation_matrices) values.push_back(w(i, j));
      out.push_back(RelationStat{task_names[std::size_t(i)], task_names[std::size_t(j)], sample_mean(values),
                                 sample_std(values), Index(values.size())});
    }
  }
  return out;
}

ExperimentReport run_task_relations(const Dataset& dataset, const ExperimentOptions& options) {
  ExperimentOptions structured = options;
  structured.models = {ModelKind::kStructured};
  ExperimentReport report = run_main_comparison(dataset, structured);
  report.experiment = "relations";
  return report;
}

}  // namespace mtlbench
