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

#include <string>
#include <utility>
#include <vector>

#include "mtlbench/data/normalize.hpp"
#include "mtlbench/data/split.hpp"
#include "mtlbench/model/model.hpp"

namespace mtlbench {

/// Splits with features standardized by training statistics and, optionally,
/// regression targets standardized the same way.
struct PreparedSplits {
  Dataset train;
  Dataset validation;
  Dataset test;
  NormalizationStats feature_stats;
  TargetScaling target_scaling;  // identity when targets are not scaled
};

PreparedSplits prepare_splits(const DatasetSplits& splits, bool scale_targets);

/// Labeled rows of one task with the matching model output, both mapped back
/// to the original target scale.
struct TaskPredictions {
  std::vector<Index> rows;
  Vector predictions;
  Vector targets;
};

TaskPredictions task_predictions(Model& model, const Dataset& dataset, Index output, std::size_t column,
                                 const TargetScaling& scaling);

}  // namespace mtlbench
