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
#include <span>
#include <string>
#include <vector>

#include "mtlbench/data/split.hpp"
#include "mtlbench/experiments/report.hpp"
#include "mtlbench/model/model.hpp"
#include "mtlbench/train/trainer.hpp"

namespace mtlbench {

struct ExperimentOptions {
  TrainConfig train;
  SplitRatios ratios;
  std::uint64_t split_seed = 42;
  std::vector<ModelKind> models{ModelKind::kIndependent, ModelKind::kShared, ModelKind::kStructured};
  bool keep_predictions = true;
  bool keep_histories = true;
};

/// Every model kind x seed; each task is scored on its labeled test rows.
/// Independent baselines see only their own task's labeled rows. Paired
/// t-tests compare structured MTL against each other model per metric.
ExperimentReport run_main_comparison(const Dataset& dataset, const ExperimentOptions& options);

struct SweepOptions {
  std::string majority_task;
  /// Empty picks the non-majority task with the fewest labels.
  std::string minority_task;
  /// Labeled majority samples kept, before splitting.
  std::vector<Index> counts;
  ModelKind model = ModelKind::kShared;
};

ExperimentReport run_imbalance_sweep(const Dataset& dataset, const SweepOptions& sweep,
                                     const ExperimentOptions& options);

/// Trains `model` and, at every `conflict_stride`-th step where two tasks
/// both have labels in the batch, records the cosine between their loss
/// gradients on the backbone parameters.
ExperimentReport run_gradient_conflict(const Dataset& dataset, const ExperimentOptions& options,
                                       ModelKind model = ModelKind::kShared);

ExperimentReport run_transfer_utility(const Dataset& dataset, const std::string& source, const std::string& target,
                                      const ExperimentOptions& options);

/// Per ordered pair (i, j), mean and sample std of w_ij across models.
std::vector<RelationStat> extract_task_relations(std::span<const Matrix> relation_matrices,
                                                 const std::vector<std::string>& task_names,
                                                 std::vector<std::string>* warnings = nullptr);

/// Trains structured models across seeds and reports their relations.
ExperimentReport run_task_relations(const Dataset& dataset, const ExperimentOptions& options);

/// cos(a, b) = a.b / sqrt((a.a)(b.b)); exactly 1 for a == b. NaN if either is 0.
double gradient_cosine(const Vector& a, const Vector& b);

/// Smallest labeled total whose split leaves exactly `train_count` training rows.
Index total_for_train_count(Index train_count, const SplitRatios& ratios);

}  // namespace mtlbench
