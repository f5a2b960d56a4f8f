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

#include "mtlbench/loss/losses.hpp"

#include <algorithm>
#include <cmath>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

LossKind loss_kind_for(TaskKind kind) {
  return kind == TaskKind::kRegression ? LossKind::kMse : LossKind::kBce;
}

MaskedLoss masked_loss(const Eigen::Ref<const Vector>& predictions, const Eigen::Ref<const Vector>& targets,
                       const Eigen::Ref<const Vector>& mask, LossKind kind) {
  const Index n = predictions.size();
  if (targets.size() != n || mask.size() != n) throw ConfigError("masked_loss: inputs differ in length");
  MaskedLoss result;
  result.gradient = Vector::Zero(n);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (mask(i) == 0.0) continue;
    ++result.labeled;
    const double y = targets(i);
    if (kind == LossKind::kMse) {
      const double e = predictions(i) - y;
      total += e * e;
      result.gradient(i) = 2.0 * e;
    } else {
      const double p = std::clamp(predictions(i), kBceClamp, 1.0 - kBceClamp);
      total += -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
      result.gradient(i) = (p - y) / (p * (1.0 - p));
    }
  }
  if (result.labeled == 0) return result;
  const double count = double(result.labeled);
  result.value = total / count;
  result.gradient /= count;
  return result;
}

TaskWeights TaskWeights::inverse_frequency(std::span<const Index> label_counts) {
  if (label_counts.empty()) throw ConfigError("task weights: no tasks");
  const Index largest = *std::max_element(label_counts.begin(), label_counts.end());
  TaskWeights weights;
  for (Index c : label_counts) {
    if (c < 1) throw ConfigError("task weights: every task needs at least one labeled sample");
    weights.values.push_back(double(largest) / double(c));
  }
  return weights;
}

TaskWeights TaskWeights::uniform(std::size_t tasks) { return TaskWeights{std::vector<double>(tasks, 1.0)}; }

void TaskWeights::validate() const {
  for (double w : values) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("task weights must be positive and finite");
  }
}

double combined_mtl_loss(std::span<const MaskedLoss> task_losses, const TaskWeights& weights) {
  if (task_losses.size() != weights.values.size()) {
    throw ConfigError("combined_mtl_loss: one weight per task loss is required");
  }
  double total = 0.0;
  for (std::size_t t = 0; t < task_losses.size(); ++t) {
    if (!task_losses[t].zero_contribution()) total += weights.values[t] * task_losses[t].value;
  }
  return total;
}

void RegularizationConfig::validate() const {
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) throw ConfigError("regularization weights must be non-negative");
  if (trace_sign != 1.0 && trace_sign != -1.0) throw ConfigError("trace_sign must be +1 or -1");
}

double relation_penalty(const Matrix& relations, const RegularizationConfig& reg) {
  return reg.lambda1 * relations.cwiseAbs().sum() + reg.lambda2 * (1.0 - reg.trace_sign * relations.trace());
}

Matrix relation_penalty_gradient(const Matrix& relations, const RegularizationConfig& reg) {
  Matrix grad = reg.lambda1 * relations.unaryExpr([](double w) { return double((w > 0.0) - (w < 0.0)); });
  grad.diagonal().array() -= reg.lambda2 * reg.trace_sign;
  return grad;
}

double structured_loss(double mtl_loss, const Matrix& relations, const RegularizationConfig& reg) {
  return mtl_loss + relation_penalty(relations, reg);
}

}  // namespace mtlbench
