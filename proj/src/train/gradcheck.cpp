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

#include "mtlbench/train/gradcheck.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include "mtlbench/core/gradcheck.hpp"
#include "mtlbench/loss/losses.hpp"

namespace mtlbench {

ModelGradCheckReport model_gradcheck(ModelKind kind, const ModelGradCheckOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<TaskKind> kinds =
      kind == ModelKind::kIndependent
          ? std::vector<TaskKind>{TaskKind::kRegression}
          : std::vector<TaskKind>{TaskKind::kRegression, TaskKind::kRegression, TaskKind::kClassification};
  ArchitectureConfig arch = options.architecture;
  arch.full_fusion_backprop = true;
  auto model = make_model(kind, kinds, arch, options.seed);

  Rng rng(mix_seed(options.seed, 11));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (const auto& b : model->buffers()) {
    const bool variance = b.name.ends_with("running_var");
    for (Index i = 0; i < b.buffer->size(); ++i) {
      (*b.buffer)(i) = variance ? 0.5 + 1.5 * uniform(rng) : 0.5 * normal(rng);
    }
  }
  for (const auto& p : model->parameters()) {
    if (p.name.ends_with("norm.gamma")) p.parameter->value.array() += 0.3 * (uniform(rng) - 0.5);
    if (p.name.ends_with("norm.beta")) p.parameter->value.setConstant(0.1 * normal(rng));
  }

  const Index n = options.batch_size;
  const Index tasks = Index(kinds.size());
  Matrix features(n, arch.input_dim), targets(n, tasks), mask(n, tasks);
  for (Index i = 0; i < features.size(); ++i) features.data()[i] = normal(rng);
  for (Index b = 0; b < n; ++b) {
    for (Index t = 0; t < tasks; ++t) {
      targets(b, t) = kinds[std::size_t(t)] == TaskKind::kRegression ? normal(rng) : double(uniform(rng) < 0.5);
      mask(b, t) = (b + t) % 3 == 2 ? 0.0 : 1.0;
    }
  }
  std::vector<double> weight_values;
  for (Index t = 0; t < tasks; ++t) weight_values.push_back(1.0 + double(t));
  const TaskWeights weights{weight_values};
  const RegularizationConfig reg;

  auto losses_of = [&](const Matrix& predictions) {
    std::vector<MaskedLoss> losses;
    for (Index t = 0; t < tasks; ++t) {
      losses.push_back(masked_loss(predictions.col(t), targets.col(t), mask.col(t),
                                   loss_kind_for(kinds[std::size_t(t)])));
    }
    return losses;
  };
  auto loss = [&]() {
    const Matrix predictions = model->forward(features, Mode::kEval);
    double total = combined_mtl_loss(losses_of(predictions), weights);
    if (model->has_relations()) total += relation_penalty(model->relation_matrix(), reg);
    return total;
  };

  model->zero_grad();
  const Matrix predictions = model->forward(features, Mode::kEval);
  const auto losses = losses_of(predictions);
  Matrix d_predictions(n, tasks);
  for (Index t = 0; t < tasks; ++t) d_predictions.col(t) = weights.values[std::size_t(t)] * losses[std::size_t(t)].gradient;
  model->backward(d_predictions);
  if (model->has_relations()) model->backward_relations(relation_penalty_gradient(model->relation_matrix(), reg));

  const auto named = model->parameters();
  std::vector<Parameter<double>*> params;
  std::vector<std::vector<Index>> entries;
  for (const auto& p : named) {
    params.push_back(p.parameter);
    std::vector<Index> all(static_cast<std::size_t>(p.parameter->size()));
    std::iota(all.begin(), all.end(), Index(0));
    if (Index(all.size()) > options.max_entries_per_parameter) {
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(std::size_t(options.max_entries_per_parameter));
      std::sort(all.begin(), all.end());
    }
    entries.push_back(std::move(all));
  }
  const GradCheckResult<double> result =
      finite_diff_check<double>(params, std::span<const std::vector<Index>>(entries), loss, options.step);

  ModelGradCheckReport report;
  report.kind = kind;
  report.max_relative_error = result.max_relative_error;
  report.worst_parameter = named[result.worst_parameter].name;
  report.worst_entry = result.worst_entry;
  report.worst_analytic = result.worst_analytic;
  report.worst_numeric = result.worst_numeric;
  report.entries_checked = result.entries_checked;
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mtlbench
