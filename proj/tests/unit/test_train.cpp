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

#include <chrono>
#include <random>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/data/split.hpp"
#include "mtlbench/data/synthetic.hpp"
#include "mtlbench/model/shared.hpp"
#include "mtlbench/stats/metrics.hpp"
#include "mtlbench/train/evaluate.hpp"
#include "mtlbench/train/gradcheck.hpp"
#include "mtlbench/train/schedule.hpp"
#include "mtlbench/train/trainer.hpp"
#include "mtlbench/train/transfer.hpp"

namespace mtlbench {
namespace {

TEST(Scheduler, ImprovingLossNeverReduces) {
  ReduceLrOnPlateau s({}, 1e-3);
  for (int e = 0; e < 100; ++e) EXPECT_EQ(s.step(10.0 - 0.01 * e), 1e-3);
}

TEST(Scheduler, FlatLossHalvesAtElevenAndQuartersAtTwentyOne) {
  ReduceLrOnPlateau s({}, 1.0);
  for (int epoch = 1; epoch <= 25; ++epoch) {
    const double lr = s.step(1.0);
    if (epoch < 11) {
      EXPECT_EQ(lr, 1.0) << epoch;
    } else if (epoch < 21) {
      EXPECT_EQ(lr, 0.5) << epoch;
    } else {
      EXPECT_EQ(lr, 0.25) << epoch;
    }
  }
}

TEST(Scheduler, FloorsAtMinimum) {
  SchedulerConfig config;
  config.patience = 1;
  ReduceLrOnPlateau s(config, config.min_lr);
  for (int e = 0; e < 10; ++e) EXPECT_EQ(s.step(1.0), config.min_lr);
}

TEST(Scheduler, TinyImprovementsBelowThresholdCountAsPlateau) {
  SchedulerConfig config;
  config.patience = 2;
  ReduceLrOnPlateau s(config, 1.0);
  s.step(1.0);
  s.step(1.0 - 1e-6);
  EXPECT_EQ(s.step(1.0 - 2e-6), 0.5);
}

TEST(EarlyStop, ConstantLossStopsAtThirtyOne) {
  EarlyStopping stop(30);
  int stopped = 0;
  for (int epoch = 1; epoch <= 100 && stopped == 0; ++epoch) {
    if (stop.step(2.0) == StopDecision::kStop) stopped = epoch;
  }
  EXPECT_EQ(stopped, 31);
}

TEST(EarlyStop, ImprovingLossNeverStops) {
  EarlyStopping stop(3);
  for (int e = 0; e < 200; ++e) EXPECT_EQ(stop.step(1.0 / (1.0 + e)), StopDecision::kContinue);
}

// y = x . beta on 21 standard-normal features: solvable by construction.
Dataset linear_task(Index n, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector beta(21);
  for (Index c = 0; c < 21; ++c) beta(c) = normal(rng) / std::sqrt(21.0);
  std::vector<std::string> names;
  for (int c = 0; c < 21; ++c) names.push_back("x" + std::to_string(c));
  DatasetBuilder builder(names, {"y"}, {TaskKind::kRegression});
  std::vector<double> x(21);
  for (Index i = 0; i < n; ++i) {
    for (auto& v : x) v = normal(rng);
    const std::optional<double> y[1] = {Eigen::Map<const RowVector>(x.data(), 21).dot(beta)};
    builder.add(x, y);
  }
  return builder.build();
}

Dataset small_union(std::uint64_t seed = 7) {
  SyntheticSpec spec;
  spec.counts = {240, 60, 60};
  spec.relatedness = 0.5;
  spec.seed = seed;
  return generate_synthetic(spec);
}

TrainConfig quick_config(Index epochs) {
  TrainConfig config;
  config.max_epochs = epochs;
  config.workers = 1;
  return config;
}

TEST(Trainer, SingleEpochHistory) {
  const Dataset ds = small_union();
  const DatasetSplits s = stratified_split(ds, {}, 1);
  SharedMTLModel model(ds.task_kinds(), {}, 3);
  const TrainHistory h = train(model, s.train, s.validation, TaskBinding::all_tasks(s.train, {}), quick_config(1), 3);
  ASSERT_EQ(h.epochs.size(), 1u);
  EXPECT_FALSE(h.early_stopped);
  EXPECT_EQ(h.best_epoch, 1);
}

TEST(Trainer, FitsALinearTask) {
  const Dataset ds = linear_task(2000, 5);
  const DatasetSplits s = stratified_split(ds, {}, 1);
  const PreparedSplits p = prepare_splits(s, true);
  auto model = make_model(ModelKind::kIndependent, {TaskKind::kRegression}, {}, 5);
  (void)train(*model, p.train, p.validation, TaskBinding::single(0), quick_config(200), 5);
  const TaskPredictions tp = task_predictions(*model, p.train, 0, 0, p.target_scaling);
  EXPECT_GT(r_squared(tp.predictions, tp.targets), 0.99);
}

TEST(Trainer, SameSeedSameHistory) {
  const Dataset ds = small_union();
  const DatasetSplits s = stratified_split(ds, {}, 1);
  const TaskBinding binding = TaskBinding::all_tasks(s.train, {});
  auto run = [&] {
    auto model = make_model(ModelKind::kStructured, ds.task_kinds(), {}, 9);
    return train(*model, s.train, s.validation, binding, quick_config(8), 9);
  };
  EXPECT_EQ(run(), run());
}

TEST(Trainer, RestoresBestParametersAndKeepsLrMonotone) {
  const Dataset ds = small_union();
  const DatasetSplits s = stratified_split(ds, {}, 1);
  const TaskBinding binding = TaskBinding::all_tasks(s.train, {});
  TrainConfig config = quick_config(40);
  config.learning_rate = 3e-3;
  config.scheduler.patience = 2;
  config.early_stop_patience = 6;
  for (ModelKind kind : {ModelKind::kShared, ModelKind::kStructured}) {
    auto model = make_model(kind, ds.task_kinds(), {}, 4);
    const TrainHistory h = train(*model, s.train, s.validation, binding, config, 4);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : h.epochs) best = std::min(best, e.validation_loss);
    EXPECT_EQ(h.best_validation_loss(), best);
    EXPECT_EQ(h.epochs[std::size_t(h.best_epoch - 1)].validation_loss, best);
    EXPECT_EQ(evaluate_loss(*model, s.validation, binding, config.regularization).loss, best) << to_string(kind);
    for (std::size_t k = 1; k < h.epochs.size(); ++k) {
      EXPECT_LE(h.epochs[k].learning_rate, h.epochs[k - 1].learning_rate);
    }
  }
}

TEST(Trainer, UnionLossEqualsLabeledSubsetLoss) {
  // Eval mode freezes batchnorm, so rows are independent; tolerance 1e-12.
  const Dataset ds = small_union();
  auto model = make_model(ModelKind::kShared, ds.task_kinds(), {}, 2);
  const TaskBinding binding = TaskBinding::all_tasks(ds, {});
  const ValidationResult full = evaluate_loss(*model, ds, binding, {});
  for (std::size_t t = 0; t < ds.num_tasks(); ++t) {
    const Dataset sub = ds.task_subset(t);
    const ValidationResult part = evaluate_loss(*model, sub, binding, {});
    EXPECT_NEAR(full.task_losses[t].value, part.task_losses[t].value, 1e-12);
  }
}

TEST(Trainer, FrozenBackboneIsBitIdentical) {
  const Dataset ds = small_union();
  const DatasetSplits s = stratified_split(ds, {}, 1);
  SharedMTLModel model(ds.task_kinds(), {}, 6);
  (void)train(model, s.train, s.validation, TaskBinding::all_tasks(s.train, {}), quick_config(2), 6);
  std::vector<Matrix> before;
  for (auto& p : model.backbone_parameters()) before.push_back(p.parameter->value);
  const ModelSnapshot buffers_before = take_snapshot(model);
  model.set_backbone_frozen(true);
  model.reset_heads(ds.task_kinds(), 17);
  (void)train(model, s.train, s.validation, TaskBinding::all_tasks(s.train, {}), quick_config(3), 7);
  const auto after = model.backbone_parameters();
  for (std::size_t k = 0; k < after.size(); ++k) EXPECT_EQ(after[k].parameter->value, before[k]) << after[k].name;
  EXPECT_EQ(take_snapshot(model).buffers, buffers_before.buffers);
}

TEST(Trainer, HookSeesEveryStep) {
  const Dataset ds = small_union();
  const DatasetSplits s = stratified_split(ds, {}, 1);
  SharedMTLModel model(ds.task_kinds(), {}, 6);
  Index calls = 0;
  TrainHooks hooks;
  hooks.before_backward = [&](Model&, const StepContext& ctx) {
    EXPECT_EQ(ctx.losses.size(), 3u);
    ++calls;
  };
  TrainConfig config = quick_config(2);
  config.early_stop_patience = 100;
  (void)train(model, s.train, s.validation, TaskBinding::all_tasks(s.train, {}), config, 6, hooks);
  EXPECT_GE(calls, 2 * (s.train.size() / 32));
}

TEST(Trainer, ConfigValidation) {
  TrainConfig config;
  config.batch_size = 1;
  EXPECT_THROW(config.validate(), ConfigError);
  config = TrainConfig{};
  config.seeds.clear();
  EXPECT_THROW(config.validate(), ConfigError);
  config = TrainConfig{};
  config.learning_rate = -1.0;
  EXPECT_THROW(config.validate(), ConfigError);
}

TEST(Transfer, RelatedTasksTransfer) {
  SyntheticSpec spec;
  spec.task_names = {"source", "target"};
  spec.task_kinds = {TaskKind::kRegression, TaskKind::kRegression};
  spec.counts = {600, 60};
  spec.relatedness = 1.0;
  const Dataset ds = generate_synthetic(spec);
  const PreparedSplits p = prepare_splits(stratified_split(ds, {}, 42), true);
  TrainConfig config = quick_config(60);
  const TransferOutcome out = pretrain_and_transfer(p, 0, 1, config, 42);
  ASSERT_FALSE(out.transfer.metrics.empty());
  EXPECT_EQ(out.transfer.metrics[2].first, "r2");
  EXPECT_TRUE(out.transfer.model->backbone_frozen());
  EXPECT_EQ(out.transfer.test_predictions.rows.size(), std::size_t(p.test.label_count(1)));
}

TEST(GradCheck, AllModelKindsPassWithinBudget) {
  // Tolerance 1e-4 relative; budget 30 s for all three.
  const auto start = std::chrono::steady_clock::now();
  for (ModelKind kind : {ModelKind::kIndependent, ModelKind::kShared, ModelKind::kStructured}) {
    const ModelGradCheckReport r = model_gradcheck(kind);
    EXPECT_TRUE(r.passed()) << to_string(kind) << " " << r.max_relative_error << " at " << r.worst_parameter;
    EXPECT_GT(r.entries_checked, 100u);
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 30.0);
}

TEST(GradCheck, StableAcrossSeeds) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ModelGradCheckOptions options;
    options.seed = seed;
    EXPECT_TRUE(model_gradcheck(ModelKind::kStructured, options).passed()) << seed;
  }
}

}  // namespace
}  // namespace mtlbench
