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

#include "mtlbench/model/blocks.hpp"
#include "mtlbench/model/model.hpp"

namespace mtlbench {

/// Single-task network: backbone blocks followed by one output unit
/// (linear for regression, sigmoid for classification).
class IndependentModel final : public Model {
 public:
  IndependentModel(TaskKind task_kind, const ArchitectureConfig& architecture, std::uint64_t seed);

  ModelKind kind() const override { return ModelKind::kIndependent; }
  std::unique_ptr<Model> clone() const override { return std::make_unique<IndependentModel>(*this); }

  Matrix forward(const Matrix& features, Mode mode) override;
  void backward(const Matrix& d_predictions) override;

  std::vector<NamedParam> parameters() override;
  std::vector<NamedParam> backbone_parameters() override;
  std::vector<NamedBuf> buffers() override;

  Linear<double>& output_layer() { return output_; }

 private:
  Backbone backbone_;
  Linear<double> output_;
  Matrix predictions_;
  bool cached_ = false;
};

}  // namespace mtlbench
