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

#include "mtlbench/model/shared.hpp"

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

SharedMTLModel::SharedMTLModel(std::vector<TaskKind> task_kinds, const ArchitectureConfig& architecture,
                               std::uint64_t seed)
    : Model(std::move(task_kinds), architecture, seed),
      backbone_(architecture.input_dim, architecture.hidden, architecture.dropout) {
  Rng init(mix_seed(seed, 1));
  backbone_.initialize(init);
  for (std::size_t t = 0; t < task_kinds_.size(); ++t) {
    heads_.emplace_back(backbone_.output_dim(), architecture.head_hidden, 1);
    heads_.back().initialize(init);
  }
}

void SharedMTLModel::reset_heads(std::vector<TaskKind> task_kinds, std::uint64_t seed) {
  if (task_kinds.empty()) throw ConfigError("reset_heads: at least one task is required");
  task_kinds_ = std::move(task_kinds);
  heads_.clear();
  Rng init(mix_seed(seed, 5));
  for (std::size_t t = 0; t < task_kinds_.size(); ++t) {
    heads_.emplace_back(backbone_.output_dim(), architecture_.head_hidden, 1);
    heads_.back().initialize(init);
  }
  cached_ = false;
}

Matrix SharedMTLModel::forward_logits(const Matrix& features, Mode mode) {
  check_input(features);
  const Mode backbone_mode = backbone_frozen_ ? Mode::kEval : mode;
  representation_ = backbone_.forward(features, backbone_mode, rng_);
  Matrix logits(features.rows(), Index(heads_.size()));
  for (std::size_t t = 0; t < heads_.size(); ++t) logits.col(Index(t)) = heads_[t].forward(representation_);
  return logits;
}

void SharedMTLModel::backward_logits(const Matrix& d_logits) {
  if (backbone_frozen_) {
    for (std::size_t t = 0; t < heads_.size(); ++t) heads_[t].backward(d_logits.col(Index(t)), false);
    return;
  }
  Matrix dz = Matrix::Zero(d_logits.rows(), backbone_.output_dim());
  for (std::size_t t = 0; t < heads_.size(); ++t) dz += heads_[t].backward(d_logits.col(Index(t)));
  backbone_.backward(dz);
}

Matrix SharedMTLModel::forward(const Matrix& features, Mode mode) {
  predictions_ = activate(forward_logits(features, mode));
  cached_ = true;
  return predictions_;
}

void SharedMTLModel::backward(const Matrix& d_predictions) {
  if (!cached_) throw UsageError("SharedMTLModel::backward called before forward");
  backward_logits(logits_gradient(predictions_, d_predictions));
}

std::vector<NamedParam> SharedMTLModel::parameters() {
  std::vector<NamedParam> out;
  backbone_.collect("backbone", out);
  for (std::size_t t = 0; t < heads_.size(); ++t) heads_[t].collect("head." + std::to_string(t), out);
  return out;
}

std::vector<NamedParam> SharedMTLModel::backbone_parameters() {
  std::vector<NamedParam> out;
  backbone_.collect("backbone", out);
  return out;
}

std::vector<NamedBuf> SharedMTLModel::buffers() {
  std::vector<NamedBuf> out;
  backbone_.collect_buffers("backbone", out);
  return out;
}

std::vector<NamedParam> SharedMTLModel::head_parameters(std::size_t task) {
  std::vector<NamedParam> out;
  heads_.at(task).collect("head." + std::to_string(task), out);
  return out;
}

}  // namespace mtlbench
