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
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mtlbench/model/shared.hpp"
#include "mtlbench/train/evaluate.hpp"
#include "mtlbench/train/trainer.hpp"

namespace mtlbench {

struct TransferArm {
  std::unique_ptr<SharedMTLModel> model;
  std::vector<std::pair<std::string, double>> metrics;  // target task, test split
  TaskPredictions test_predictions;
  TrainHistory history;  // target-task training
};

struct TransferOutcome {
  TransferArm transfer;
  TransferArm scratch;
  TrainHistory source_history;
};

/// Arm A trains a backbone and source head on source-labeled rows, freezes the
/// backbone, and fits a fresh target head on target-labeled rows. Arm B trains
/// the same architecture on target-labeled rows from scratch. Both arms share
/// the training budget and early-stopping rule.
TransferOutcome pretrain_and_transfer(const PreparedSplits& splits, std::size_t source, std::size_t target,
                                      const TrainConfig& config, std::uint64_t seed);

}  // namespace mtlbench
