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

#include "mtlbench/data/dataset.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

std::string to_string(TaskKind kind) {
  return kind == TaskKind::kRegression ? "regression" : "classification";
}

TaskKind task_kind_from_string(const std::string& text) {
  if (text == "regression") return TaskKind::kRegression;
  if (text == "classification") return TaskKind::kClassification;
  throw ConfigError("unknown task kind '" + text + "' (expected regression|classification)");
}

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<std::string> task_names,
                 std::vector<TaskKind> task_kinds)
    : feature_names_(std::move(feature_names)),
      task_names_(std::move(task_names)),
      task_kinds_(std::move(task_kinds)),
      features_(0, Index(feature_names_.size())),
      targets_(0, Index(task_names_.size())),
      mask_(0, Index(task_names_.size())) {
  if (task_names_.size() != task_kinds_.size()) {
    throw ConfigError("dataset: task names and task kinds differ in length");
  }
}

Dataset Dataset::from_samples(std::vector<std::string> feature_names, std::vector<std::string> task_names,
                              std::vector<TaskKind> task_kinds, std::span<const Sample> samples) {
  DatasetBuilder builder(std::move(feature_names), std::move(task_names), std::move(task_kinds));
  builder.reserve(Index(samples.size()));
  for (const auto& s : samples) builder.add(s.features, s.targets);
  return builder.build();
}

std::size_t Dataset::task_index(const std::string& name) const {
  for (std::size_t t = 0; t < task_names_.size(); ++t) {
    if (task_names_[t] == name) return t;
  }
  throw ConfigError("unknown task '" + name + "'");
}

Index Dataset::label_count(std::size_t task) const {
  Index count = 0;
  for (Index r = 0; r < size(); ++r) count += has_label(r, task) ? 1 : 0;
  return count;
}

std::vector<Index> Dataset::labeled_rows(std::size_t task) const {
  std::vector<Index> rows;
  for (Index r = 0; r < size(); ++r) {
    if (has_label(r, task)) rows.push_back(r);
  }
  return rows;
}

Sample Dataset::sample(Index row) const {
  Sample s;
  s.features.assign(features_.row(row).data(), features_.row(row).data() + features_.cols());
  for (std::size_t t = 0; t < num_tasks(); ++t) {
    if (has_label(row, t)) {
      s.targets.emplace_back(targets_(row, Index(t)));
    } else {
      s.targets.emplace_back(std::nullopt);
    }
  }
  return s;
}

Dataset Dataset::subset(std::span<const Index> rows) const {
  Dataset out(feature_names_, task_names_, task_kinds_);
  out.features_.resize(Index(rows.size()), features_.cols());
  out.targets_.resize(Index(rows.size()), targets_.cols());
  out.mask_.resize(Index(rows.size()), mask_.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index r = rows[i];
    if (r < 0 || r >= size()) throw ArgumentError("dataset subset: row index out of range");
    out.features_.row(Index(i)) = features_.row(r);
    out.targets_.row(Index(i)) = targets_.row(r);
    out.mask_.row(Index(i)) = mask_.row(r);
  }
  return out;
}

Dataset Dataset::task_subset(std::size_t task) const {
  const auto rows = labeled_rows(task);
  return subset(rows);
}

void Dataset::set_features(Matrix features) {
  if (features.rows() != features_.rows() || features.cols() != features_.cols()) {
    throw ConfigError("dataset: replacement feature matrix has the wrong shape");
  }
  features_ = std::move(features);
}

void Dataset::set_task_targets(std::size_t task, const Vector& values) {
  if (values.size() != size()) throw ConfigError("dataset: replacement targets have the wrong length");
  for (Index r = 0; r < size(); ++r) {
    if (has_label(r, task)) targets_(r, Index(task)) = values(r);
  }
}

bool Dataset::operator==(const Dataset& other) const {
  if (feature_names_ != other.feature_names_ || task_names_ != other.task_names_ ||
      task_kinds_ != other.task_kinds_ || size() != other.size()) {
    return false;
  }
  if (features_ != other.features_ || mask_ != other.mask_) return false;
  for (Index r = 0; r < size(); ++r) {
    for (Index t = 0; t < targets_.cols(); ++t) {
      if (mask_(r, t) != 0.0 && targets_(r, t) != other.targets_(r, t)) return false;
    }
  }
  return true;
}

DatasetBuilder::DatasetBuilder(std::vector<std::string> feature_names, std::vector<std::string> task_names,
                               std::vector<TaskKind> task_kinds)
    : dataset_(std::move(feature_names), std::move(task_names), std::move(task_kinds)) {}

void DatasetBuilder::reserve(Index rows) {
  features_.reserve(std::size_t(rows * dataset_.feature_dim()));
  targets_.reserve(std::size_t(rows) * dataset_.num_tasks());
  mask_.reserve(std::size_t(rows) * dataset_.num_tasks());
}

void DatasetBuilder::add(std::span<const double> features, std::span<const std::optional<double>> targets) {
  if (Index(features.size()) != dataset_.feature_dim()) {
    throw ConfigError("dataset: sample has " + std::to_string(features.size()) + " features, expected " +
                      std::to_string(dataset_.feature_dim()));
  }
  if (targets.size() != dataset_.num_tasks()) {
    throw ConfigError("dataset: sample has " + std::to_string(targets.size()) + " target slots, expected " +
                      std::to_string(dataset_.num_tasks()));
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (!targets[t].has_value()) continue;
    const double v = *targets[t];
    if (!std::isfinite(v)) throw DataError("dataset: non-finite target for task " + dataset_.task_names_[t]);
    if (dataset_.task_kinds_[t] == TaskKind::kClassification && v != 0.0 && v != 1.0) {
      throw DataError("dataset: classification label for task " + dataset_.task_names_[t] + " must be 0 or 1");
    }
  }
  features_.insert(features_.end(), features.begin(), features.end());
  for (const auto& t : targets) {
    targets_.push_back(t.has_value() ? *t : std::numeric_limits<double>::quiet_NaN());
    mask_.push_back(t.has_value() ? 1.0 : 0.0);
  }
  ++rows_;
}

Dataset DatasetBuilder::build() {
  const Index d = dataset_.feature_dim();
  const Index t = Index(dataset_.num_tasks());
  dataset_.features_ = Eigen::Map<const Matrix>(features_.data(), rows_, d);
  dataset_.targets_ = Eigen::Map<const Matrix>(targets_.data(), rows_, t);
  dataset_.mask_ = Eigen::Map<const Matrix>(mask_.data(), rows_, t);
  features_.clear();
  targets_.clear();
  mask_.clear();
  rows_ = 0;
  return std::move(dataset_);
}

const std::vector<std::string>& default_feature_names() {
  static const std::vector<std::string> names{"Al", "Ti", "Cr", "Fe",    "Co",    "Ni",     "Cu",
                                              "Zr", "Mo", "W",  "Mn",    "Si",    "Mg",     "Re",
                                              "Ta", "r_avg", "delta", "dH_mix", "EN_avg", "dEN", "N"};
  return names;
}

}  // namespace mtlbench
