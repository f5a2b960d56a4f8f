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

#include "mtlbench/model/independent.hpp"

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

IndependentModel::IndependentModel(TaskKind task_kind, const ArchitectureConfig& architecture, std::uint64_t seed)
    : Model({task_kind}, architecture, seed),
      backbone_(architecture.input_dim, architecture.hidden, architecture.dropout),
      output_(backbone_.output_dim(), 1) {
  Rng init(mix_seed(seed, 1));
  backbone_.initialize(init);
  output_.initialize(init);
}

Matrix IndependentModel::forward(const Matrix& features, Mode mode) {
  check_input(features);
  const Mode backbone_mode = backbone_frozen_ ? Mode::kEval : mode;
  const Matrix z = backbone_.forward(features, backbone_mode, rng_);
  predictions_ = activate(output_.forward(z));
  cached_ = true;
  return predictions_;
}

void IndependentModel::backward(const Matrix& d_predictions) {
  if (!cached_) throw UsageError("IndependentModel::backward called before forward");
  const Matrix dz = output_.backward(logits_gradient(predictions_, d_predictions), !backbone_frozen_);
  if (!backbone_frozen_) backbone_.backward(dz);
}

std::vector<NamedParam> IndependentModel::parameters() {
  std::vector<NamedParam> out;
  backbone_.collect("backbone", out);
  output_.collect("output", out);
  return out;
}

std::vector<NamedParam> IndependentModel::backbone_parameters() {
  std::vector<NamedParam> out;
  backbone_.collect("backbone", out);
  return out;
}

std::vector<NamedBuf> IndependentModel::buffers() {
  std::vector<NamedBuf> out;
  backbone_.collect_buffers("backbone", out);
  return out;
}

}  // namespace mtlbench
