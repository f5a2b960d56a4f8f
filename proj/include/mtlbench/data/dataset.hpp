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

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtlbench/core/types.hpp"

namespace mtlbench {

enum class TaskKind { kRegression, kClassification };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& text);

struct Sample {
  std::vector<double> features;
  std::vector<std::optional<double>> targets;  // one slot per task
};

/// Union dataset: every sample carries the full feature vector and an
/// availability mask per task. Missing targets are stored as NaN and are
/// never read by any loss or metric.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> feature_names, std::vector<std::string> task_names,
          std::vector<TaskKind> task_kinds);

  static Dataset from_samples(std::vector<std::string> feature_names, std::vector<std::string> task_names,
                              std::vector<TaskKind> task_kinds, std::span<const Sample> samples);

  Index size() const { return features_.rows(); }
  Index feature_dim() const { return Index(feature_names_.size()); }
  std::size_t num_tasks() const { return task_names_.size(); }

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& task_names() const { return task_names_; }
  const std::vector<TaskKind>& task_kinds() const { return task_kinds_; }
  std::size_t task_index(const std::string& name) const;

  const Matrix& features() const { return features_; }
  const Matrix& targets() const { return targets_; }
  /// 1.0 where the label exists, 0.0 otherwise.
  const Matrix& mask() const { return mask_; }

  bool has_label(Index row, std::size_t task) const { return mask_(row, Index(task)) != 0.0; }
  Index label_count(std::size_t task) const;
  std::vector<Index> labeled_rows(std::size_t task) const;
  Sample sample(Index row) const;

  Dataset subset(std::span<const Index> rows) const;
  /// Rows carrying a label for `task`.
  Dataset task_subset(std::size_t task) const;

  /// Replaces the feature matrix (same shape). Used by normalization.
  void set_features(Matrix features);
  /// Replaces regression targets for `task`; mask is untouched.
  void set_task_targets(std::size_t task, const Vector& values);

  bool operator==(const Dataset& other) const;

 private:
  friend class DatasetBuilder;
  std::vector<std::string> feature_names_;
  std::vector<std::string> task_names_;
  std::vector<TaskKind> task_kinds_;
  Matrix features_;
  Matrix targets_;
  Matrix mask_;
};

/// Incremental construction of a Dataset with row validation.
class DatasetBuilder {
 public:
  DatasetBuilder(std::vector<std::string> feature_names, std::vector<std::string> task_names,
                 std::vector<TaskKind> task_kinds);
  void reserve(Index rows);
  void add(std::span<const double> features, std::span<const std::optional<double>> targets);
  Dataset build();

 private:
  Dataset dataset_;
  std::vector<double> features_;
  std::vector<double> targets_;
  std::vector<double> mask_;
  Index rows_ = 0;
};

/// The 21 descriptor columns of the alloy schema, in file order.
const std::vector<std::string>& default_feature_names();

}  // namespace mtlbench
