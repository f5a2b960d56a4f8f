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

#include <span>
#include <vector>

#include "mtlbench/core/types.hpp"
#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

enum class LossKind { kMse, kBce };

LossKind loss_kind_for(TaskKind kind);

inline constexpr double kBceClamp = 1e-7;

/// Result of a masked per-task loss. `labeled == 0` is the zero-contribution
/// case: value 0 and an all-zero gradient.
struct MaskedLoss {
  double value = 0.0;
  Vector gradient;  // d value / d predictions
  Index labeled = 0;

  bool zero_contribution() const { return labeled == 0; }
};

/// (sum_i m_i * l(y_i, p_i)) / (sum_i m_i). Entries with m_i = 0 are never
/// read, so their targets may hold NaN.
MaskedLoss masked_loss(const Eigen::Ref<const Vector>& predictions, const Eigen::Ref<const Vector>& targets,
                       const Eigen::Ref<const Vector>& mask, LossKind kind);

struct TaskWeights {
  std::vector<double> values;

  /// Weight for task t is max_count / count_t (1 for the largest task).
  static TaskWeights inverse_frequency(std::span<const Index> label_counts);
  static TaskWeights uniform(std::size_t tasks);
  void validate() const;
};

/// sum_t w_t * L_t; zero-contribution tasks add nothing.
double combined_mtl_loss(std::span<const MaskedLoss> task_losses, const TaskWeights& weights);

struct RegularizationConfig {
  double lambda1 = 0.01;
  double lambda2 = 0.1;
  /// +1 reproduces lambda2 * (1 - tr(W)); -1 gives lambda2 * (1 + tr(W)),
  /// which penalizes self-loops instead of rewarding them.
  double trace_sign = 1.0;

  void validate() const;
  bool operator==(const RegularizationConfig&) const = default;
};

/// lambda1 * ||W||_1 + lambda2 * (1 - trace_sign * tr(W)).
double relation_penalty(const Matrix& relations, const RegularizationConfig& reg);
Matrix relation_penalty_gradient(const Matrix& relations, const RegularizationConfig& reg);

/// mtl_loss + relation_penalty(W).
double structured_loss(double mtl_loss, const Matrix& relations, const RegularizationConfig& reg);

}  // namespace mtlbench
