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

#include "mtlbench/data/normalize.hpp"

#include <cmath>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/log.hpp"

namespace mtlbench {

NormalizationStats fit_normalize(const Dataset& train) {
  if (train.size() == 0) throw ArgumentError("fit_normalize: training split is empty");
  const Matrix& x = train.features();
  NormalizationStats stats;
  stats.mean = x.colwise().mean();
  const Matrix centered = x.rowwise() - stats.mean;
  stats.std = (centered.array().square().colwise().sum() / double(x.rows())).sqrt().matrix();
  stats.degenerate.assign(std::size_t(x.cols()), false);
  for (Index c = 0; c < x.cols(); ++c) {
    if (!(stats.std(c) > 0.0)) {
      stats.std(c) = 1.0;
      stats.degenerate[std::size_t(c)] = true;
      log_warning("fit_normalize: feature '" + train.feature_names()[std::size_t(c)] +
                  "' has zero variance; std forced to 1");
    }
  }
  return stats;
}

Dataset apply_normalize(const Dataset& dataset, const NormalizationStats& stats) {
  if (stats.mean.size() != dataset.feature_dim() || stats.std.size() != dataset.feature_dim()) {
    throw ConfigError("apply_normalize: statistics do not match the feature dimension");
  }
  Matrix x = dataset.features().rowwise() - stats.mean;
  x.array().rowwise() /= stats.std.array();
  Dataset out = dataset;
  out.set_features(std::move(x));
  return out;
}

TargetScaling fit_target_scaling(const Dataset& train) {
  TargetScaling scaling;
  for (std::size_t t = 0; t < train.num_tasks(); ++t) {
    double mean = 0.0;
    double std = 1.0;
    if (train.task_kinds()[t] == TaskKind::kRegression) {
      const auto rows = train.labeled_rows(t);
      if (!rows.empty()) {
        for (Index r : rows) mean += train.targets()(r, Index(t));
        mean /= double(rows.size());
        double ss = 0.0;
        for (Index r : rows) {
          const double d = train.targets()(r, Index(t)) - mean;
          ss += d * d;
        }
        std = std::sqrt(ss / double(rows.size()));
        if (!(std > 0.0)) std = 1.0;
      }
    }
    scaling.mean.push_back(mean);
    scaling.std.push_back(std);
  }
  return scaling;
}

Dataset apply_target_scaling(const Dataset& dataset, const TargetScaling& scaling) {
  if (scaling.mean.size() != dataset.num_tasks()) {
    throw ConfigError("apply_target_scaling: scaling does not match the task count");
  }
  Dataset out = dataset;
  for (std::size_t t = 0; t < dataset.num_tasks(); ++t) {
    if (dataset.task_kinds()[t] != TaskKind::kRegression) continue;
    const Vector scaled =
        ((dataset.targets().col(Index(t)).array() - scaling.mean[t]) / scaling.std[t]).matrix();
    out.set_task_targets(t, scaled);
  }
  return out;
}

}  // namespace mtlbench
