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
#include "mtlbench/model/shared.hpp"

namespace mtlbench {

/// Shared-backbone MTL plus a learned task relation graph. Each task owns a
/// learnable embedding; a two-layer GCN over the complete task graph refines
/// the embeddings and an edge predictor scores every ordered pair (i, j)
/// from [h_i, h_j] into w_ij in (0, 1). Fused outputs are
///
///   y_i = f_i(z) + alpha * sum_{j != i} w_ij * g_i(f_j(z))
///
/// on logits; classification tasks apply the sigmoid after fusion.
class StructuredMTLModel final : public Model {
 public:
  StructuredMTLModel(std::vector<TaskKind> task_kinds, const ArchitectureConfig& architecture,
                     std::uint64_t seed);

  ModelKind kind() const override { return ModelKind::kStructured; }
  std::unique_ptr<Model> clone() const override { return std::make_unique<StructuredMTLModel>(*this); }

  Matrix forward(const Matrix& features, Mode mode) override;
  void backward(const Matrix& d_predictions) override;

  bool has_relations() const override { return true; }
  Matrix relation_matrix() override;
  void backward_relations(const Matrix& d_relations) override;

  std::vector<NamedParam> parameters() override;
  std::vector<NamedParam> backbone_parameters() override;
  std::vector<NamedBuf> buffers() override;

  SharedMTLModel& shared() { return shared_; }
  /// Unfused logits f_i(z) of the last forward pass.
  const Matrix& base_logits() const { return base_logits_; }
  Parameter<double>& embeddings() { return embeddings_; }
  void set_alpha(double alpha) { architecture_.alpha = alpha; }

  /// g_i applied elementwise to a column of inputs (exposed for tests).
  Matrix fuse(std::size_t task, const Matrix& inputs);

 private:
  Matrix compute_relations();

  SharedMTLModel shared_;
  Parameter<double> embeddings_;
  GraphConvolution gcn_first_;
  GraphConvolution gcn_second_;
  TwoLayerPerceptron edge_predictor_;
  std::vector<TwoLayerPerceptron> fusion_;
  Matrix adjacency_;

  // Forward caches.
  Matrix hidden_nodes_;
  Matrix refined_nodes_;
  Matrix relations_;
  bool relations_cached_ = false;
  Matrix base_logits_;
  std::vector<Matrix> fusion_outputs_;  // per task i: batch x tasks, entry (b, j) = g_i(f_j(z)_b)
  Matrix predictions_;
  bool cached_ = false;
};

}  // namespace mtlbench
