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

#include "mtlbench/train/transfer.hpp"

#include "mtlbench/core/errors.hpp"
#include "mtlbench/stats/metrics.hpp"

namespace mtlbench {

TransferOutcome pretrain_and_transfer(const PreparedSplits& splits, std::size_t source, std::size_t target,
                                      const TrainConfig& config, std::uint64_t seed) {
  const Dataset& train_set = splits.train;
  if (source >= train_set.num_tasks() || target >= train_set.num_tasks()) {
    throw ConfigError("pretrain_and_transfer: task index out of range");
  }
  if (source == target) throw ConfigError("pretrain_and_transfer: source and target must differ");
  const TaskKind source_kind = train_set.task_kinds()[source];
  const TaskKind target_kind = train_set.task_kinds()[target];
  const Dataset target_train = train_set.task_subset(target);
  const Dataset target_validation = splits.validation.task_subset(target);

  TransferOutcome outcome;
  auto finish = [&](TransferArm& arm) {
    arm.test_predictions = task_predictions(*arm.model, splits.test, 0, target, splits.target_scaling);
    arm.metrics = task_metrics(target_kind, arm.test_predictions.predictions, arm.test_predictions.targets);
  };

  auto pretrained = std::make_unique<SharedMTLModel>(std::vector<TaskKind>{source_kind}, config.architecture, seed);
  outcome.source_history = train(*pretrained, train_set.task_subset(source), splits.validation.task_subset(source),
                                 TaskBinding::single(source), config, seed);
  pretrained->reset_heads({target_kind}, seed);
  pretrained->set_backbone_frozen(true);
  outcome.transfer.history =
      train(*pretrained, target_train, target_validation, TaskBinding::single(target), config, seed);
  outcome.transfer.model = std::move(pretrained);
  finish(outcome.transfer);

  auto scratch = std::make_unique<SharedMTLModel>(std::vector<TaskKind>{target_kind}, config.architecture, seed);
  outcome.scratch.history = train(*scratch, target_train, target_validation, TaskBinding::single(target), config, seed);
  outcome.scratch.model = std::move(scratch);
  finish(outcome.scratch);
  return outcome;
}

}  // namespace mtlbench
