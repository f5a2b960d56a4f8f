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

// Layer kernels with hand-derived backward passes. Every function is a free
// function over explicit layer state so that models compose them directly.

#include <algorithm>
#include <cmath>
#include <string>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/types.hpp"

namespace mtlbench {

template <typename Scalar>
struct Parameter {
  MatrixX<Scalar> value;
  MatrixX<Scalar> grad;

  Parameter() = default;
  Parameter(Index rows, Index cols)
      : value(MatrixX<Scalar>::Zero(rows, cols)), grad(MatrixX<Scalar>::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
  Index size() const { return value.size(); }
};

// ---------------------------------------------------------------------------
// Dense

template <typename Scalar>
struct DenseLayer {
  Parameter<Scalar> weights;  // fan_in x fan_out
  Parameter<Scalar> bias;     // 1 x fan_out

  DenseLayer() = default;
  DenseLayer(Index fan_in, Index fan_out) : weights(fan_in, fan_out), bias(1, fan_out) {}

  Index fan_in() const { return weights.value.rows(); }
  Index fan_out() const { return weights.value.cols(); }

  /// Uniform in +-sqrt(6 / fan_in), zero bias.
  template <typename Gen>
  void initialize(Gen& rng) {
    const Scalar bound = std::sqrt(Scalar(6) / Scalar(fan_in()));
    std::uniform_real_distribution<double> dist(-double(bound), double(bound));
    for (Index i = 0; i < weights.value.size(); ++i) weights.value.data()[i] = Scalar(dist(rng));
    bias.value.setZero();
  }
};

template <typename Scalar>
MatrixX<Scalar> dense_forward(const MatrixX<Scalar>& input, const DenseLayer<Scalar>& layer) {
  if (input.cols() != layer.fan_in()) {
    throw ConfigError("dense_forward: input has " + std::to_string(input.cols()) +
                      " columns, layer expects " + std::to_string(layer.fan_in()));
  }
  MatrixX<Scalar> output(input.rows(), layer.fan_out());
  output.noalias() = input * layer.weights.value;
  output.rowwise() += layer.bias.value.row(0);
  return output;
}

/// Accumulates weight/bias gradients. Writes d(input) when `d_input` is set.
template <typename Scalar>
void dense_backward(const MatrixX<Scalar>& input, DenseLayer<Scalar>& layer,
                    const MatrixX<Scalar>& d_output, MatrixX<Scalar>* d_input) {
  layer.weights.grad.noalias() += input.transpose() * d_output;
  layer.bias.grad += d_output.colwise().sum();
  if (d_input != nullptr) {
    d_input->resize(d_output.rows(), layer.fan_in());
    d_input->noalias() = d_output * layer.weights.value.transpose();
  }
}

// ---------------------------------------------------------------------------
// Activations

enum class Activation { kRelu, kSigmoid };

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  if (x >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-x));
  const Scalar e = std::exp(x);
  return e / (Scalar(1) + e);
}

template <typename Scalar>
MatrixX<Scalar> activation_apply(const MatrixX<Scalar>& input, Activation kind) {
  if (kind == Activation::kRelu) return input.cwiseMax(Scalar(0));
  return input.unaryExpr([](Scalar x) { return sigmoid(x); });
}

/// Gradient through an activation, expressed via its forward output.
template <typename Scalar>
MatrixX<Scalar> activation_backward(const MatrixX<Scalar>& output, Activation kind,
                                    const MatrixX<Scalar>& d_output) {
  if (kind == Activation::kRelu) {
    return d_output.binaryExpr(output, [](Scalar d, Scalar y) { return y > Scalar(0) ? d : Scalar(0); });
  }
  return d_output.cwiseProduct(output.cwiseProduct((Scalar(1) - output.array()).matrix()));
}

// ---------------------------------------------------------------------------
// Batch normalization

template <typename Scalar>
struct BatchNormLayer {
  Parameter<Scalar> gamma;
  Parameter<Scalar> beta;
  RowVectorX<Scalar> running_mean;
  RowVectorX<Scalar> running_var;
  Scalar momentum = Scalar(0.1);
  Scalar epsilon = Scalar(1e-5);

  BatchNormLayer() = default;
  explicit BatchNormLayer(Index features)
      : gamma(1, features),
        beta(1, features),
        running_mean(RowVectorX<Scalar>::Zero(features)),
        running_var(RowVectorX<Scalar>::Ones(features)) {
    gamma.value.setOnes();
  }

  Index features() const { return gamma.value.cols(); }
};

template <typename Scalar>
struct BatchNormCache {
  MatrixX<Scalar> normalized;
  RowVectorX<Scalar> inv_std;
  Mode mode = Mode::kEval;
};

/// Train mode normalizes with biased batch statistics and folds them into the
/// running estimates (unbiased variance); eval mode uses the running estimates.
template <typename Scalar>
MatrixX<Scalar> batchnorm_forward(const MatrixX<Scalar>& input, BatchNormLayer<Scalar>& layer, Mode mode,
                                  BatchNormCache<Scalar>* cache = nullptr) {
  if (input.cols() != layer.features()) {
    throw ConfigError("batchnorm_forward: input has " + std::to_string(input.cols()) +
                      " columns, layer expects " + std::to_string(layer.features()));
  }
  const Index n = input.rows();
  MatrixX<Scalar> normalized(n, input.cols());
  RowVectorX<Scalar> inv_std;
  if (mode == Mode::kTrain) {
    if (n < 2) throw DegenerateBatchError("batchnorm_forward: train mode needs a batch of at least 2 rows");
    const RowVectorX<Scalar> mean = input.colwise().mean();
    normalized = input.rowwise() - mean;
    const RowVectorX<Scalar> var = normalized.array().square().colwise().sum().matrix() / Scalar(n);
    inv_std = (var.array() + layer.epsilon).rsqrt().matrix();
    normalized.array().rowwise() *= inv_std.array();
    const Scalar m = layer.momentum;
    layer.running_mean = (Scalar(1) - m) * layer.running_mean + m * mean;
    layer.running_var = (Scalar(1) - m) * layer.running_var + m * var * (Scalar(n) / Scalar(n - 1));
  } else {
    inv_std = (layer.running_var.array() + layer.epsilon).rsqrt().matrix();
    normalized = input.rowwise() - layer.running_mean;
    normalized.array().rowwise() *= inv_std.array();
  }
  MatrixX<Scalar> output = normalized;
  output.array().rowwise() *= layer.gamma.value.row(0).array();
  output.rowwise() += layer.beta.value.row(0);
  if (cache != nullptr) {
    cache->normalized = std::move(normalized);
    cache->inv_std = std::move(inv_std);
    cache->mode = mode;
  }
  return output;
}

template <typename Scalar>
MatrixX<Scalar> batchnorm_backward(BatchNormLayer<Scalar>& layer, const BatchNormCache<Scalar>& cache,
                                   const MatrixX<Scalar>& d_output) {
  const MatrixX<Scalar>& xhat = cache.normalized;
  layer.gamma.grad += d_output.cwiseProduct(xhat).colwise().sum();
  layer.beta.grad += d_output.colwise().sum();
  MatrixX<Scalar> d_xhat = d_output;
  d_xhat.array().rowwise() *= layer.gamma.value.row(0).array();
  if (cache.mode == Mode::kEval) {
    d_xhat.array().rowwise() *= cache.inv_std.array();
    return d_xhat;
  }
  const Scalar n = Scalar(d_output.rows());
  const RowVectorX<Scalar> sum_d = d_xhat.colwise().sum();
  const RowVectorX<Scalar> sum_dx = d_xhat.cwiseProduct(xhat).colwise().sum();
  MatrixX<Scalar> d_input = (d_xhat * n).rowwise() - sum_d;
  d_input.array() -= xhat.array().rowwise() * sum_dx.array();
  d_input.array().rowwise() *= (cache.inv_std.array() / n);
  return d_input;
}

// ---------------------------------------------------------------------------
// Dropout

template <typename Scalar>
struct DropoutResult {
  MatrixX<Scalar> output;
  MatrixX<Scalar> mask;  // per-entry multiplier: 0 if dropped, 1/(1 - rate) if kept; 1 in eval mode
};

/// Inverted dropout: survivors are scaled by 1/(1 - rate) at train time.
template <typename Scalar, typename Gen>
DropoutResult<Scalar> dropout_forward(const MatrixX<Scalar>& input, Scalar rate, Mode mode, Gen& rng) {
  if (!(rate >= Scalar(0) && rate < Scalar(1))) {
    throw ConfigError("dropout_forward: rate must lie in [0, 1)");
  }
  DropoutResult<Scalar> result;
  if (mode == Mode::kEval || rate == Scalar(0)) {
    result.output = input;
    result.mask = MatrixX<Scalar>::Ones(input.rows(), input.cols());
    return result;
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const Scalar keep = Scalar(1) / (Scalar(1) - rate);
  result.mask.resize(input.rows(), input.cols());
  for (Index i = 0; i < result.mask.size(); ++i) {
    result.mask.data()[i] = uniform(rng) < double(rate) ? Scalar(0) : keep;
  }
  result.output = input.cwiseProduct(result.mask);
  return result;
}

template <typename Scalar>
MatrixX<Scalar> dropout_backward(const MatrixX<Scalar>& mask, const MatrixX<Scalar>& d_output) {
  return d_output.cwiseProduct(mask);
}

}  // namespace mtlbench
