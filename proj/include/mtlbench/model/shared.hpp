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

#include <vector>

#include "mtlbench/model/blocks.hpp"
#include "mtlbench/model/model.hpp"

namespace mtlbench {

/// Hard parameter sharing: one backbone, one head (hidden -> 1) per task.
class SharedMTLModel final : public Model {
 public:
  SharedMTLModel(std::vector<TaskKind> task_kinds, const ArchitectureConfig& architecture, std::uint64_t seed);

  ModelKind kind() const override { return ModelKind::kShared; }
  std::unique_ptr<Model> clone() const override { return std::make_unique<SharedMTLModel>(*this); }

  Matrix forward(const Matrix& features, Mode mode) override;
  void backward(const Matrix& d_predictions) override;

  /// Head outputs before the output activation, plus the representation z.
  Matrix forward_logits(const Matrix& features, Mode mode);
  void backward_logits(const Matrix& d_logits);
  const Matrix& representation() const { return representation_; }

  std::vector<NamedParam> parameters() override;
  std::vector<NamedParam> backbone_parameters() override;
  std::vector<NamedBuf> buffers() override;
  std::vector<NamedParam> head_parameters(std::size_t task);

  /// Replaces task heads with freshly initialized ones (transfer studies).
  void reset_heads(std::vector<TaskKind> task_kinds, std::uint64_t seed);

 private:
  Backbone backbone_;
  std::vector<TwoLayerPerceptron> heads_;
  Matrix representation_;
  Matrix predictions_;
  bool cached_ = false;
};

}  // namespace mtlbench
