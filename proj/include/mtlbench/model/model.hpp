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
#include <memory>
#include <string>
#include <vector>

#include "mtlbench/core/modules.hpp"
#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

enum class ModelKind { kIndependent, kShared, kStructured };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

struct ArchitectureConfig {
  Index input_dim = 21;
  std::vector<Index> hidden{128, 128};
  Index head_hidden = 64;
  double dropout = 0.3;
  // Structured model only.
  Index embedding_dim = 64;
  Index gcn_hidden = 64;
  Index edge_hidden = 32;
  Index fusion_hidden = 16;
  double alpha = 0.1;
  /// Let gradients flow into the base predictions consumed by the fusion
  /// networks. Off by default: those inputs are treated as constants.
  bool full_fusion_backprop = false;

  bool operator==(const ArchitectureConfig&) const = default;
};

using NamedParam = NamedParameter<double>;
using NamedBuf = NamedBuffer<double>;

/// Common surface of the three model families. Predictions are a
/// batch x outputs matrix; classification columns hold probabilities.
class Model {
 public:
  virtual ~Model() = default;

  virtual ModelKind kind() const = 0;
  virtual std::unique_ptr<Model> clone() const = 0;

  virtual Matrix forward(const Matrix& features, Mode mode) = 0;
  /// Backpropagates d(loss)/d(predictions) of the most recent forward pass,
  /// accumulating into parameter gradients.
  virtual void backward(const Matrix& d_predictions) = 0;

  virtual std::vector<NamedParam> parameters() = 0;
  virtual std::vector<NamedParam> backbone_parameters() = 0;
  virtual std::vector<NamedBuf> buffers() = 0;

  /// Task relation matrix W (structured model only).
  virtual bool has_relations() const { return false; }
  virtual Matrix relation_matrix();
  /// Backpropagates an extra d(loss)/dW, e.g. from relation regularization.
  virtual void backward_relations(const Matrix& d_relations);

  /// A frozen backbone runs in eval mode and receives no gradient.
  void set_backbone_frozen(bool frozen) { backbone_frozen_ = frozen; }
  bool backbone_frozen() const { return backbone_frozen_; }

  std::vector<NamedParam> trainable_parameters();
  void zero_grad();
  Index parameter_count();

  const std::vector<TaskKind>& task_kinds() const { return task_kinds_; }
  std::size_t num_outputs() const { return task_kinds_.size(); }
  const ArchitectureConfig& architecture() const { return architecture_; }
  Rng& rng() { return rng_; }

 protected:
  Model(std::vector<TaskKind> task_kinds, ArchitectureConfig architecture, std::uint64_t seed);
  Model(const Model&) = default;
  Model& operator=(const Model&) = default;

  void check_input(const Matrix& features) const;
  /// Applies per-task output activations to logits.
  Matrix activate(const Matrix& logits) const;
  /// Chain rule through the output activations of `predictions`.
  Matrix logits_gradient(const Matrix& predictions, const Matrix& d_predictions) const;

  std::vector<TaskKind> task_kinds_;
  ArchitectureConfig architecture_;
  Rng rng_;
  bool backbone_frozen_ = false;
};

/// Seeded construction; identical seeds give bit-identical parameters.
/// Independent models take exactly one task kind.
std::unique_ptr<Model> make_model(ModelKind kind, std::vector<TaskKind> task_kinds,
                                  const ArchitectureConfig& architecture, std::uint64_t seed);

/// Parameter values and normalization buffers, in declaration order.
struct ModelSnapshot {
  std::vector<Matrix> parameters;
  std::vector<RowVector> buffers;
};

ModelSnapshot take_snapshot(Model& model);
void restore_snapshot(Model& model, const ModelSnapshot& snapshot);

}  // namespace mtlbench
