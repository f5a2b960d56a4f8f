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

#include "mtlbench/train/evaluate.hpp"

#include "mtlbench/core/errors.hpp"
#include "mtlbench/train/trainer.hpp"

namespace mtlbench {

PreparedSplits prepare_splits(const DatasetSplits& splits, bool scale_targets) {
  PreparedSplits out;
  out.feature_stats = fit_normalize(splits.train);
  out.train = apply_normalize(splits.train, out.feature_stats);
  out.validation = apply_normalize(splits.validation, out.feature_stats);
  out.test = apply_normalize(splits.test, out.feature_stats);
  if (scale_targets) {
    out.target_scaling = fit_target_scaling(splits.train);
    out.train = apply_target_scaling(out.train, out.target_scaling);
    out.validation = apply_target_scaling(out.validation, out.target_scaling);
    out.test = apply_target_scaling(out.test, out.target_scaling);
  } else {
    out.target_scaling.mean.assign(splits.train.num_tasks(), 0.0);
    out.target_scaling.std.assign(splits.train.num_tasks(), 1.0);
  }
  return out;
}

TaskPredictions task_predictions(Model& model, const Dataset& dataset, Index output, std::size_t column,
                                 const TargetScaling& scaling) {
  if (output < 0 || std::size_t(output) >= model.num_outputs()) throw ConfigError("task_predictions: bad output");
  if (column >= dataset.num_tasks() || column >= scaling.mean.size()) {
    throw ConfigError("task_predictions: bad task column");
  }
  const Matrix all = predict(model, dataset);
  TaskPredictions out;
  out.rows = dataset.labeled_rows(column);
  const Index n = Index(out.rows.size());
  out.predictions.resize(n);
  out.targets.resize(n);
  const double mean = scaling.mean[column];
  const double std = scaling.std[column];
  for (Index i = 0; i < n; ++i) {
    const Index r = out.rows[std::size_t(i)];
    out.predictions(i) = all(r, output) * std + mean;
    out.targets(i) = dataset.targets()(r, Index(column)) * std + mean;
  }
  return out;
}

}  // namespace mtlbench
