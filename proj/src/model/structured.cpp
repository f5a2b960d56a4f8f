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

#include "mtlbench/model/structured.hpp"

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

StructuredMTLModel::StructuredMTLModel(std::vector<TaskKind> task_kinds, const ArchitectureConfig& architecture,
                                       std::uint64_t seed)
    : Model(task_kinds, architecture, seed),
      shared_(task_kinds, architecture, seed),
      embeddings_(Index(task_kinds.size()), architecture.embedding_dim),
      gcn_first_(architecture.embedding_dim, architecture.gcn_hidden),
      gcn_second_(architecture.gcn_hidden, architecture.gcn_hidden),
      edge_predictor_(2 * architecture.gcn_hidden, architecture.edge_hidden, 1) {
  const Index tasks = Index(task_kinds_.size());
  if (tasks < 2) throw ConfigError("structured model needs at least two tasks");
  Rng init(mix_seed(seed, 3));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index i = 0; i < embeddings_.value.size(); ++i) embeddings_.value.data()[i] = normal(init);
  gcn_first_.initialize(init);
  gcn_second_.initialize(init);
  edge_predictor_.initialize(init);
  for (Index t = 0; t < tasks; ++t) {
    fusion_.emplace_back(1, architecture.fusion_hidden, 1);
    fusion_.back().initialize(init);
  }
  // Complete graph without self-loops; D^-1/2 A D^-1/2 = A / (T - 1).
  adjacency_ = (Matrix::Ones(tasks, tasks) - Matrix::Identity(tasks, tasks)) / double(tasks - 1);
}

Matrix StructuredMTLModel::compute_relations() {
  const Index tasks = Index(task_kinds_.size());
  hidden_nodes_ = activation_apply(gcn_first_.forward(adjacency_, embeddings_.value), Activation::kRelu);
  refined_nodes_ = gcn_second_.forward(adjacency_, hidden_nodes_);
  const Index width = refined_nodes_.cols();
  Matrix pairs(tasks * tasks, 2 * width);
  for (Index i = 0; i < tasks; ++i) {
    for (Index j = 0; j < tasks; ++j) {
      pairs.block(i * tasks + j, 0, 1, width) = refined_nodes_.row(i);
      pairs.block(i * tasks + j, width, 1, width) = refined_nodes_.row(j);
    }
  }
  const Matrix scores = activation_apply(edge_predictor_.forward(pairs), Activation::kSigmoid);
  relations_ = Eigen::Map<const Matrix>(scores.data(), tasks, tasks);
  relations_cached_ = true;
  return relations_;
}

Matrix StructuredMTLModel::relation_matrix() { return compute_relations(); }

void StructuredMTLModel::backward_relations(const Matrix& d_relations) {
  if (!relations_cached_) throw UsageError("backward_relations called before the relations were computed");
  const Index tasks = Index(task_kinds_.size());
  if (d_relations.rows() != tasks || d_relations.cols() != tasks) {
    throw ConfigError("backward_relations: gradient must be tasks x tasks");
  }
  const Matrix flat_w = Eigen::Map<const Matrix>(relations_.data(), tasks * tasks, 1);
  const Matrix flat_d = Eigen::Map<const Matrix>(d_relations.data(), tasks * tasks, 1);
  const Matrix d_pairs = edge_predictor_.backward(activation_backward(flat_w, Activation::kSigmoid, flat_d));
  const Index width = refined_nodes_.cols();
  Matrix d_refined = Matrix::Zero(tasks, width);
  for (Index i = 0; i < tasks; ++i) {
    for (Index j = 0; j < tasks; ++j) {
      d_refined.row(i) += d_pairs.block(i * tasks + j, 0, 1, width);
      d_refined.row(j) += d_pairs.block(i * tasks + j, width, 1, width);
    }
  }
  const Matrix d_hidden = gcn_second_.backward(d_refined);
  embeddings_.grad += gcn_first_.backward(activation_backward(hidden_nodes_, Activation::kRelu, d_hidden));
}

Matrix StructuredMTLModel::fuse(std::size_t task, const Matrix& inputs) { return fusion_.at(task).forward(inputs); }

Matrix StructuredMTLModel::forward(const Matrix& features, Mode mode) {
  const Index tasks = Index(task_kinds_.size());
  shared_.set_backbone_frozen(backbone_frozen_);
  base_logits_ = shared_.forward_logits(features, mode);
  const Matrix w = compute_relations();
  const Index batch = base_logits_.rows();
  // Column-major flattening: entry (j * batch + b) holds f_j(z)_b.
  Matrix stacked(tasks * batch, 1);
  for (Index j = 0; j < tasks; ++j) stacked.block(j * batch, 0, batch, 1) = base_logits_.col(j);

  Matrix fused = base_logits_;
  fusion_outputs_.assign(std::size_t(tasks), Matrix());
  for (Index i = 0; i < tasks; ++i) {
    const Matrix g = fusion_[std::size_t(i)].forward(stacked);
    Matrix per_source(batch, tasks);
    for (Index j = 0; j < tasks; ++j) per_source.col(j) = g.block(j * batch, 0, batch, 1);
    Vector auxiliary = Vector::Zero(batch);
    for (Index j = 0; j < tasks; ++j) {
      if (j != i) auxiliary += w(i, j) * per_source.col(j);
    }
    fused.col(i) += architecture_.alpha * auxiliary;
    fusion_outputs_[std::size_t(i)] = std::move(per_source);
  }
  predictions_ = activate(fused);
  cached_ = true;
  return predictions_;
}

void StructuredMTLModel::backward(const Matrix& d_predictions) {
  if (!cached_) throw UsageError("StructuredMTLModel::backward called before forward");
  const Index tasks = Index(task_kinds_.size());
  const Index batch = base_logits_.rows();
  const double alpha = architecture_.alpha;
  const Matrix d_fused = logits_gradient(predictions_, d_predictions);
  Matrix d_base = d_fused;
  Matrix d_relations = Matrix::Zero(tasks, tasks);
  for (Index i = 0; i < tasks; ++i) {
    const Matrix& per_source = fusion_outputs_[std::size_t(i)];
    Matrix d_stacked = Matrix::Zero(tasks * batch, 1);
    for (Index j = 0; j < tasks; ++j) {
      if (j == i) continue;
      d_relations(i, j) = alpha * d_fused.col(i).dot(per_source.col(j));
      d_stacked.block(j * batch, 0, batch, 1) = (alpha * relations_(i, j)) * d_fused.col(i);
    }
    const Matrix d_inputs = fusion_[std::size_t(i)].backward(d_stacked, architecture_.full_fusion_backprop);
    if (architecture_.full_fusion_backprop) {
      for (Index j = 0; j < tasks; ++j) d_base.col(j) += d_inputs.block(j * batch, 0, batch, 1);
    }
  }
  shared_.backward_logits(d_base);
  backward_relations(d_relations);
}

std::vector<NamedParam> StructuredMTLModel::parameters() {
  std::vector<NamedParam> out = shared_.parameters();
  out.push_back({"relation.embeddings", &embeddings_});
  gcn_first_.collect("relation.gcn.0", out);
  gcn_second_.collect("relation.gcn.1", out);
  edge_predictor_.collect("relation.edge", out);
  for (std::size_t t = 0; t < fusion_.size(); ++t) fusion_[t].collect("fusion." + std::to_string(t), out);
  return out;
}

std::vector<NamedParam> StructuredMTLModel::backbone_parameters() { return shared_.backbone_parameters(); }

std::vector<NamedBuf> StructuredMTLModel::buffers() { return shared_.buffers(); }

}  // namespace mtlbench
