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

#include "mtlbench/core/types.hpp"
#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

inline constexpr double kDecisionThreshold = 0.5;

struct RegressionMetrics {
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 0.0;  // NaN when the targets are constant
};

struct ClassificationMetrics {
  double accuracy = 0.0;
  double f1 = 0.0;
  double auc = 0.0;  // NaN when only one class is present
  double recall = 0.0;
};

/// Both functions warn on undefined r2 / auc.
RegressionMetrics regression_metrics(const Eigen::Ref<const Vector>& predictions,
                                     const Eigen::Ref<const Vector>& targets);
/// A probability at or above `threshold` predicts the positive class.
ClassificationMetrics classification_metrics(const Eigen::Ref<const Vector>& probabilities,
                                             const Eigen::Ref<const Vector>& labels,
                                             double threshold = kDecisionThreshold);

/// Silent variants; NaN where undefined.
double r_squared(const Eigen::Ref<const Vector>& predictions, const Eigen::Ref<const Vector>& targets);
/// Mann-Whitney statistic with half credit for ties.
double roc_auc(const Eigen::Ref<const Vector>& scores, const Eigen::Ref<const Vector>& labels);

/// Named metrics in report order: rmse, mae, r2 or accuracy, f1, auc, recall.
std::vector<std::pair<std::string, double>> task_metrics(TaskKind kind, const Eigen::Ref<const Vector>& predictions,
                                                         const Eigen::Ref<const Vector>& targets);
/// r2 for regression, auc for classification.
std::string headline_metric(TaskKind kind);

}  // namespace mtlbench
