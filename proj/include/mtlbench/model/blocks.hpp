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

#include <string>
#include <vector>

#include "mtlbench/core/modules.hpp"

namespace mtlbench {

/// Stack of hidden blocks producing the shared representation z.
class Backbone {
 public:
  Backbone() = default;
  Backbone(Index input_dim, const std::vector<Index>& hidden, double dropout);

  void initialize(Rng& rng);
  Matrix forward(const Matrix& features, Mode mode, Rng& rng);
  /// Input gradients are not needed below the backbone.
  void backward(const Matrix& d_output);

  Index output_dim() const { return output_dim_; }
  void collect(const std::string& prefix, std::vector<NamedParameter<double>>& out);
  void collect_buffers(const std::string& prefix, std::vector<NamedBuffer<double>>& out);

 private:
  std::vector<HiddenBlock<double>> blocks_;
  Index output_dim_ = 0;
};

/// Linear -> ReLU -> Linear with a scalar output; used for task heads,
/// fusion networks and the edge predictor.
class TwoLayerPerceptron {
 public:
  TwoLayerPerceptron() = default;
  TwoLayerPerceptron(Index input_dim, Index hidden_dim, Index output_dim);

  void initialize(Rng& rng);
  Matrix forward(const Matrix& input);
  Matrix backward(const Matrix& d_output, bool need_input_grad = true);
  void collect(const std::string& prefix, std::vector<NamedParameter<double>>& out);

 private:
  Linear<double> hidden_;
  Linear<double> output_;
  Matrix activated_;
  bool cached_ = false;
};

/// out = A_hat * H * Theta with a fixed normalized adjacency.
class GraphConvolution {
 public:
  GraphConvolution() = default;
  GraphConvolution(Index input_dim, Index output_dim);

  void initialize(Rng& rng);
  Matrix forward(const Matrix& adjacency, const Matrix& nodes);
  /// Returns d(nodes).
  Matrix backward(const Matrix& d_output);
  void collect(const std::string& prefix, std::vector<NamedParameter<double>>& out);

 private:
  Parameter<double> weight_;
  Matrix adjacency_;
  Matrix aggregated_;
  bool cached_ = false;
};

}  // namespace mtlbench
