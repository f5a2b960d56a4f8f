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

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/layers.hpp"

namespace mtlbench {

template <typename Scalar>
struct AdamState {
  std::vector<MatrixX<Scalar>> first_moment;
  std::vector<MatrixX<Scalar>> second_moment;
  std::int64_t step_count = 0;
  Scalar beta1 = Scalar(0.9);
  Scalar beta2 = Scalar(0.999);
  Scalar epsilon = Scalar(1e-8);
};

/// One bias-corrected Adam update over `params` using their accumulated
/// gradients. Weight decay is folded into the gradient (g + wd * theta).
/// Moments are allocated on the first call; later calls must pass the same
/// parameter shapes in the same order.
template <typename Scalar>
void adam_step(std::span<Parameter<Scalar>* const> params, AdamState<Scalar>& state, Scalar learning_rate,
               Scalar weight_decay) {
  if (state.first_moment.empty() && state.step_count == 0) {
    for (const auto* p : params) {
      state.first_moment.push_back(MatrixX<Scalar>::Zero(p->value.rows(), p->value.cols()));
      state.second_moment.push_back(MatrixX<Scalar>::Zero(p->value.rows(), p->value.cols()));
    }
  }
  if (state.first_moment.size() != params.size()) {
    throw ConfigError("adam_step: optimizer state tracks " + std::to_string(state.first_moment.size()) +
                      " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& p = *params[k];
    if (p.grad.rows() != p.value.rows() || p.grad.cols() != p.value.cols() ||
        state.first_moment[k].rows() != p.value.rows() || state.first_moment[k].cols() != p.value.cols()) {
      throw ConfigError("adam_step: shape mismatch for parameter " + std::to_string(k));
    }
    if (!p.grad.allFinite()) {
      throw NumericError("adam_step: non-finite gradient in parameter " + std::to_string(k));
    }
  }

  ++state.step_count;
  const Scalar t = Scalar(state.step_count);
  const Scalar correction1 = Scalar(1) - std::pow(state.beta1, t);
  const Scalar correction2 = Scalar(1) - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& p = *params[k];
    auto m = state.first_moment[k].array();
    auto v = state.second_moment[k].array();
    const auto g = p.grad.array() + weight_decay * p.value.array();
    m = state.beta1 * m + (Scalar(1) - state.beta1) * g;
    v = state.beta2 * v + (Scalar(1) - state.beta2) * g.square();
    p.value.array() -= learning_rate * (m / correction1) / ((v / correction2).sqrt() + state.epsilon);
  }
}

}  // namespace mtlbench
