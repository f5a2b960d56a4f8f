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

// Stateful wrappers that cache forward values for the backward pass.

#include <string>
#include <vector>

#include "mtlbench/core/layers.hpp"

namespace mtlbench {

template <typename Scalar>
struct NamedParameter {
  std::string name;
  Parameter<Scalar>* parameter;
};

template <typename Scalar>
struct NamedBuffer {
  std::string name;
  RowVectorX<Scalar>* buffer;
};

template <typename Scalar>
class Linear {
 public:
  Linear() = default;
  Linear(Index fan_in, Index fan_out) : layer_(fan_in, fan_out) {}

  template <typename Gen>
  void initialize(Gen& rng) {
    layer_.initialize(rng);
  }

  MatrixX<Scalar> forward(const MatrixX<Scalar>& input) {
    MatrixX<Scalar> output = dense_forward(input, layer_);
    input_ = input;
    cached_ = true;
    return output;
  }

  /// Returns d(input); pass need_input_grad = false at the bottom of a stack.
  MatrixX<Scalar> backward(const MatrixX<Scalar>& d_output, bool need_input_grad = true) {
    if (!cached_) throw UsageError("Linear::backward called before forward");
    MatrixX<Scalar> d_input;
    dense_backward(input_, layer_, d_output, need_input_grad ? &d_input : nullptr);
    return d_input;
  }

  void collect(const std::string& prefix, std::vector<NamedParameter<Scalar>>& out) {
    out.push_back({prefix + ".weight", &layer_.weights});
    out.push_back({prefix + ".bias", &layer_.bias});
  }

  DenseLayer<Scalar>& layer() { return layer_; }
  const DenseLayer<Scalar>& layer() const { return layer_; }

 private:
  DenseLayer<Scalar> layer_;
  MatrixX<Scalar> input_;
  bool cached_ = false;
};

/// dense -> batchnorm -> ReLU -> dropout.
template <typename Scalar>
class HiddenBlock {
 public:
  HiddenBlock() = default;
  HiddenBlock(Index fan_in, Index fan_out, Scalar dropout_rate)
      : dense_(fan_in, fan_out), norm_(fan_out), dropout_rate_(dropout_rate) {}

  template <typename Gen>
  void initialize(Gen& rng) {
    dense_.initialize(rng);
  }

  template <typename Gen>
  MatrixX<Scalar> forward(const MatrixX<Scalar>& input, Mode mode, Gen& rng) {
    MatrixX<Scalar> pre = dense_forward(input, dense_);
    MatrixX<Scalar> normed = batchnorm_forward(pre, norm_, mode, &norm_cache_);
    activated_ = activation_apply(normed, Activation::kRelu);
    DropoutResult<Scalar> dropped = dropout_forward(activated_, dropout_rate_, mode, rng);
    input_ = input;
    mask_ = std::move(dropped.mask);
    cached_ = true;
    return std::move(dropped.output);
  }

  MatrixX<Scalar> backward(const MatrixX<Scalar>& d_output, bool need_input_grad = true) {
    if (!cached_) throw UsageError("HiddenBlock::backward called before forward");
    const MatrixX<Scalar> d_activated = dropout_backward(mask_, d_output);
    const MatrixX<Scalar> d_normed = activation_backward(activated_, Activation::kRelu, d_activated);
    const MatrixX<Scalar> d_pre = batchnorm_backward(norm_, norm_cache_, d_normed);
    MatrixX<Scalar> d_input;
    dense_backward(input_, dense_, d_pre, need_input_grad ? &d_input : nullptr);
    return d_input;
  }

  void collect(const std::string& prefix, std::vector<NamedParameter<Scalar>>& out) {
    out.push_back({prefix + ".dense.weight", &dense_.weights});
    out.push_back({prefix + ".dense.bias", &dense_.bias});
    out.push_back({prefix + ".norm.gamma", &norm_.gamma});
    out.push_back({prefix + ".norm.beta", &norm_.beta});
  }

  void collect_buffers(const std::string& prefix, std::vector<NamedBuffer<Scalar>>& out) {
    out.push_back({prefix + ".norm.running_mean", &norm_.running_mean});
    out.push_back({prefix + ".norm.running_var", &norm_.running_var});
  }

  DenseLayer<Scalar>& dense() { return dense_; }
  BatchNormLayer<Scalar>& norm() { return norm_; }
  Scalar dropout_rate() const { return dropout_rate_; }

 private:
  DenseLayer<Scalar> dense_;
  BatchNormLayer<Scalar> norm_;
  Scalar dropout_rate_ = Scalar(0);
  MatrixX<Scalar> input_;
  BatchNormCache<Scalar> norm_cache_;
  MatrixX<Scalar> activated_;
  MatrixX<Scalar> mask_;
  bool cached_ = false;
};

}  // namespace mtlbench
