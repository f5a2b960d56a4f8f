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
#include <string>
#include <vector>

#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

struct SyntheticSpec {
  Index feature_dim = 21;
  std::vector<std::string> task_names{"resistivity", "hardness", "amorphous"};
  std::vector<TaskKind> task_kinds{TaskKind::kRegression, TaskKind::kRegression, TaskKind::kClassification};
  std::vector<Index> counts{5239, 80, 84};
  double relatedness = 0.0;
  Index teacher_width = 16;
  double noise_std = 0.1;
  /// Fraction of positives in each classification task.
  double classification_balance = 0.5;
  std::uint64_t seed = 7;

  void validate() const;
};

/// Fixed random teachers behind a synthetic dataset. One shared teacher and
/// one private teacher per task, each a two-layer tanh network. Teacher
/// outputs are whitened on a reference sample so that they are centred,
/// unit-variance and mutually uncorrelated; relatedness then controls the
/// cross-task correlation directly.
class SyntheticTeachers {
 public:
  explicit SyntheticTeachers(const SyntheticSpec& spec);

  /// Noise-free latent scores, one column per task.
  Matrix latent_scores(const Matrix& features) const;
  /// Whitened teacher outputs: column 0 shared, then one per task.
  Matrix teacher_outputs(const Matrix& features) const;

 private:
  Matrix raw_outputs(const Matrix& features) const;

  struct Teacher {
    Matrix input_weights;  // feature_dim x width
    RowVector input_bias;
    Vector output_weights;  // width
  };
  SyntheticSpec spec_;
  std::vector<Teacher> teachers_;
  RowVector raw_mean_;
  Matrix whitening_;  // raw (centred) -> whitened, upper triangular
};

/// Disjoint per-task sample blocks (union structure) with i.i.d. standard
/// normal features.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace mtlbench
