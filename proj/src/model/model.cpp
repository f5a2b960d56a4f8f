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

#include "mtlbench/model/model.hpp"

#include "mtlbench/core/errors.hpp"
#include "mtlbench/model/independent.hpp"
#include "mtlbench/model/shared.hpp"
#include "mtlbench/model/structured.hpp"

namespace mtlbench {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kIndependent:
      return "independent";
    case ModelKind::kShared:
      return "standard_mtl";
    case ModelKind::kStructured:
      return "structured_mtl";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& text) {
  if (text == "independent") return ModelKind::kIndependent;
  if (text == "standard_mtl" || text == "shared") return ModelKind::kShared;
  if (text == "structured_mtl" || text == "structured") return ModelKind::kStructured;
  throw ConfigError("unknown model kind '" + text + "'");
}

Model::Model(std::vector<TaskKind> task_kinds, ArchitectureConfig architecture, std::uint64_t seed)
    : task_kinds_(std::move(task_kinds)), architecture_(std::move(architecture)), rng_(mix_seed(seed, 2)) {
  if (task_kinds_.empty()) throw ConfigError("model: at least one task is required");
  if (architecture_.input_dim < 1 || architecture_.hidden.empty()) {
    throw ConfigError("model: input_dim and hidden widths must be non-empty");
  }
}

Matrix Model::relation_matrix() { throw UsageError("relation_matrix: model has no task relation graph"); }

void Model::backward_relations(const Matrix&) {
  throw UsageError("backward_relations: model has no task relation graph");
}

std::vector<NamedParam> Model::trainable_parameters() {
  if (!backbone_frozen_) return parameters();
  const auto frozen = backbone_parameters();
  std::vector<NamedParam> out;
  for (const auto& p : parameters()) {
    bool is_frozen = false;
    for (const auto& f : frozen) is_frozen = is_frozen || f.parameter == p.parameter;
    if (!is_frozen) out.push_back(p);
  }
  return out;
}

void Model::zero_grad() {
  for (auto& p : parameters()) p.parameter->zero_grad();
}

Index Model::parameter_count() {
  Index count = 0;
  for (const auto& p : parameters()) count += p.parameter->size();
  return count;
}

void Model::check_input(const Matrix& features) const {
  if (features.cols() != architecture_.input_dim) {
    throw ConfigError("model: expected " + std::to_string(architecture_.input_dim) + " features, got " +
                      std::to_string(features.cols()));
  }
}

Matrix Model::activate(const Matrix& logits) const {
  Matrix out = logits;
  for (Index c = 0; c < out.cols(); ++c) {
    if (task_kinds_[std::size_t(c)] == TaskKind::kClassification) {
      out.col(c) = logits.col(c).unaryExpr([](double x) { return sigmoid(x); });
    }
  }
  return out;
}

Matrix Model::logits_gradient(const Matrix& predictions, const Matrix& d_predictions) const {
  if (d_predictions.rows() != predictions.rows() || d_predictions.cols() != predictions.cols()) {
    throw ConfigError("backward: gradient shape does not match the last predictions");
  }
  Matrix d_logits = d_predictions;
  for (Index c = 0; c < d_logits.cols(); ++c) {
    if (task_kinds_[std::size_t(c)] == TaskKind::kClassification) {
      d_logits.col(c).array() *= predictions.col(c).array() * (1.0 - predictions.col(c).array());
    }
  }
  return d_logits;
}

std::unique_ptr<Model> make_model(ModelKind kind, std::vector<TaskKind> task_kinds,
                                  const ArchitectureConfig& architecture, std::uint64_t seed) {
  switch (kind) {
    case ModelKind::kIndependent:
      if (task_kinds.size() != 1) throw ConfigError("independent model takes exactly one task");
      return std::make_unique<IndependentModel>(task_kinds.front(), architecture, seed);
    case ModelKind::kShared:
      return std::make_unique<SharedMTLModel>(std::move(task_kinds), architecture, seed);
    case ModelKind::kStructured:
      return std::make_unique<StructuredMTLModel>(std::move(task_kinds), architecture, seed);
  }
  throw ConfigError("make_model: unknown model kind");
}

ModelSnapshot take_snapshot(Model& model) {
  ModelSnapshot snapshot;
  for (const auto& p : model.parameters()) snapshot.parameters.push_back(p.parameter->value);
  for (const auto& b : model.buffers()) snapshot.buffers.push_back(*b.buffer);
  return snapshot;
}

void restore_snapshot(Model& model, const ModelSnapshot& snapshot) {
  auto params = model.parameters();
  auto buffers = model.buffers();
  if (params.size() != snapshot.parameters.size() || buffers.size() != snapshot.buffers.size()) {
    throw ConfigError("restore_snapshot: snapshot does not match the model layout");
  }
  for (std::size_t k = 0; k < params.size(); ++k) params[k].parameter->value = snapshot.parameters[k];
  for (std::size_t k = 0; k < buffers.size(); ++k) *buffers[k].buffer = snapshot.buffers[k];
}

}  // namespace mtlbench
