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

#include "mtlbench/model/blocks.hpp"

#include <cmath>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

Backbone::Backbone(Index input_dim, const std::vector<Index>& hidden, double dropout) {
  Index fan_in = input_dim;
  for (Index width : hidden) {
    blocks_.emplace_back(fan_in, width, dropout);
    fan_in = width;
  }
  output_dim_ = fan_in;
}

void Backbone::initialize(Rng& rng) {
  for (auto& block : blocks_) block.initialize(rng);
}

Matrix Backbone::forward(const Matrix& features, Mode mode, Rng& rng) {
  Matrix h = features;
  for (auto& block : blocks_) h = block.forward(h, mode, rng);
  return h;
}

void Backbone::backward(const Matrix& d_output) {
  Matrix d = d_output;
  for (std::size_t k = blocks_.size(); k-- > 0;) d = blocks_[k].backward(d, k > 0);
}

void Backbone::collect(const std::string& prefix, std::vector<NamedParameter<double>>& out) {
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k].collect(prefix + "." + std::to_string(k), out);
}

void Backbone::collect_buffers(const std::string& prefix, std::vector<NamedBuffer<double>>& out) {
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    blocks_[k].collect_buffers(prefix + "." + std::to_string(k), out);
  }
}

TwoLayerPerceptron::TwoLayerPerceptron(Index input_dim, Index hidden_dim, Index output_dim)
    : hidden_(input_dim, hidden_dim), output_(hidden_dim, output_dim) {}

void TwoLayerPerceptron::initialize(Rng& rng) {
  hidden_.initialize(rng);
  output_.initialize(rng);
}

Matrix TwoLayerPerceptron::forward(const Matrix& input) {
  activated_ = activation_apply(hidden_.forward(input), Activation::kRelu);
  cached_ = true;
  return output_.forward(activated_);
}

Matrix TwoLayerPerceptron::backward(const Matrix& d_output, bool need_input_grad) {
  if (!cached_) throw UsageError("TwoLayerPerceptron::backward called before forward");
  const Matrix d_activated = output_.backward(d_output);
  return hidden_.backward(activation_backward(activated_, Activation::kRelu, d_activated), need_input_grad);
}

void TwoLayerPerceptron::collect(const std::string& prefix, std::vector<NamedParameter<double>>& out) {
  hidden_.collect(prefix + ".hidden", out);
  output_.collect(prefix + ".output", out);
}

GraphConvolution::GraphConvolution(Index input_dim, Index output_dim) : weight_(input_dim, output_dim) {}

void GraphConvolution::initialize(Rng& rng) {
  const double bound = std::sqrt(6.0 / double(weight_.value.rows()));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Index i = 0; i < weight_.value.size(); ++i) weight_.value.data()[i] = dist(rng);
}

Matrix GraphConvolution::forward(const Matrix& adjacency, const Matrix& nodes) {
  if (nodes.cols() != weight_.value.rows() || adjacency.cols() != nodes.rows()) {
    throw ConfigError("GraphConvolution: shape mismatch");
  }
  adjacency_ = adjacency;
  aggregated_ = adjacency * nodes;
  cached_ = true;
  return aggregated_ * weight_.value;
}

Matrix GraphConvolution::backward(const Matrix& d_output) {
  if (!cached_) throw UsageError("GraphConvolution::backward called before forward");
  weight_.grad.noalias() += aggregated_.transpose() * d_output;
  return adjacency_.transpose() * (d_output * weight_.value.transpose());
}

void GraphConvolution::collect(const std::string& prefix, std::vector<NamedParameter<double>>& out) {
  out.push_back({prefix + ".weight", &weight_});
}

}  // namespace mtlbench
