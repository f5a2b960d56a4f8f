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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mtlbench/data/batch.hpp"
#include "mtlbench/data/dataset.hpp"
#include "mtlbench/loss/losses.hpp"
#include "mtlbench/model/model.hpp"
#include "mtlbench/train/schedule.hpp"

namespace mtlbench {

struct TrainConfig {
  double learning_rate = 1e-3;
  Index batch_size = 32;
  Index max_epochs = 200;
  Index early_stop_patience = 30;
  double weight_decay = 1e-5;
  SchedulerConfig scheduler;
  std::vector<std::uint64_t> seeds{42, 123, 456, 789, 1024};
  /// One weight per dataset task; empty means inverse label frequency on the
  /// training split.
  std::vector<double> task_weights;
  RegularizationConfig regularization;
  ArchitectureConfig architecture;
  /// Standardize regression targets with training-split statistics.
  bool scale_targets = true;
  /// Record a gradient-conflict sample every `conflict_stride` eligible steps.
  Index conflict_stride = 1;
  /// Parallel seed workers; 0 picks the hardware concurrency.
  Index workers = 0;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

/// Maps model outputs to dataset task columns with per-output loss weights.
struct TaskBinding {
  std::vector<std::size_t> columns;
  std::vector<double> weights;

  /// Every dataset task in order.
  static TaskBinding all_tasks(const Dataset& train, const std::vector<double>& explicit_weights);
  /// A single task with weight 1.
  static TaskBinding single(std::size_t column);
};

struct EpochRecord {
  Index epoch = 0;  // 1-based
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double learning_rate = 0.0;
  std::vector<double> task_validation_loss;    // per model output
  std::vector<double> task_validation_metric;  // r2 or auc per output, NaN when undefined

  bool operator==(const EpochRecord&) const = default;
};

struct TrainHistory {
  std::vector<std::string> output_names;
  std::vector<EpochRecord> epochs;
  Index best_epoch = 0;
  Index stopped_epoch = 0;
  bool early_stopped = false;

  double best_validation_loss() const;
  /// epoch,train_loss,validation_loss,learning_rate,<task>_val_loss,<task>_val_metric...
  void write_csv(std::ostream& out) const;
  bool operator==(const TrainHistory& other) const;
};

/// Forward pass of one batch with its per-output masked losses.
struct StepContext {
  Index epoch = 0;
  Index step = 0;
  const Batch* batch = nullptr;
  const Matrix* predictions = nullptr;
  std::span<const MaskedLoss> losses;
};

struct TrainHooks {
  /// Runs after the forward pass and before the optimizer backward. The hook
  /// may call model.backward on the cached pass; gradients are zeroed after.
  std::function<void(Model&, const StepContext&)> before_backward;
};

struct ValidationResult {
  double loss = 0.0;
  std::vector<MaskedLoss> task_losses;
  std::vector<double> task_metrics;
};

/// Weighted masked loss (plus the relation penalty when the model has one)
/// over the whole dataset in eval mode.
ValidationResult evaluate_loss(Model& model, const Dataset& dataset, const TaskBinding& binding,
                               const RegularizationConfig& regularization);

/// Adam over the trainable parameters with plateau scheduling and early
/// stopping. The model is left at its best-validation parameters.
TrainHistory train(Model& model, const Dataset& train_set, const Dataset& validation_set, const TaskBinding& binding,
                   const TrainConfig& config, std::uint64_t seed, const TrainHooks& hooks = {});

/// Eval-mode predictions for every row, one column per model output.
Matrix predict(Model& model, const Dataset& dataset);

}  // namespace mtlbench
