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

#include "mtlbench/data/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {
namespace {

constexpr Index kReferenceSamples = 20000;

Matrix standard_normal(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (feature_dim < 1) throw ConfigError("synthetic: feature_dim must be at least 1");
  if (task_names.empty() || task_names.size() != task_kinds.size() || task_names.size() != counts.size()) {
    throw ConfigError("synthetic: task names, kinds and counts must have the same non-zero length");
  }
  for (Index c : counts) {
    if (c < 1) throw ConfigError("synthetic: every task count must be at least 1");
  }
  if (!(relatedness >= 0.0 && relatedness <= 1.0)) throw ConfigError("synthetic: relatedness must lie in [0, 1]");
  if (teacher_width < 1) throw ConfigError("synthetic: teacher_width must be at least 1");
  if (!(noise_std >= 0.0)) throw ConfigError("synthetic: noise_std must be non-negative");
  if (!(classification_balance > 0.0 && classification_balance < 1.0)) {
    throw ConfigError("synthetic: classification_balance must lie in (0, 1)");
  }
}

SyntheticTeachers::SyntheticTeachers(const SyntheticSpec& spec) : spec_(spec) {
  spec_.validate();
  Rng rng(mix_seed(spec.seed, 0x7eac4e5));
  const std::size_t n_teachers = spec.task_names.size() + 1;
  const double input_scale = 1.5 / std::sqrt(double(spec.feature_dim));
  for (std::size_t k = 0; k < n_teachers; ++k) {
    Teacher teacher;
    teacher.input_weights = standard_normal(spec.feature_dim, spec.teacher_width, rng) * input_scale;
    teacher.input_bias = standard_normal(1, spec.teacher_width, rng) * 0.5;
    teacher.output_weights = standard_normal(spec.teacher_width, 1, rng);
    teachers_.push_back(std::move(teacher));
  }
  // Whitening on a reference sample: a Cholesky factor of the output
  // covariance orthogonalizes the teachers in order (shared first).
  Rng reference_rng(mix_seed(spec.seed, 0x4ef));
  const Matrix reference = standard_normal(kReferenceSamples, spec.feature_dim, reference_rng);
  const Matrix raw = raw_outputs(reference);
  raw_mean_ = raw.colwise().mean();
  const Matrix centered = raw.rowwise() - raw_mean_;
  const Matrix covariance = (centered.transpose() * centered) / double(kReferenceSamples);
  const Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success) throw NumericError("synthetic: teacher outputs are linearly dependent");
  const Matrix lower = llt.matrixL();
  whitening_ = lower.transpose().triangularView<Eigen::Upper>().solve(
      Matrix::Identity(Index(n_teachers), Index(n_teachers)));
}

Matrix SyntheticTeachers::raw_outputs(const Matrix& features) const {
  Matrix out(features.rows(), Index(teachers_.size()));
  for (std::size_t k = 0; k < teachers_.size(); ++k) {
    const auto& t = teachers_[k];
    Matrix hidden = features * t.input_weights;
    hidden.rowwise() += t.input_bias;
    out.col(Index(k)) = hidden.array().tanh().matrix() * t.output_weights;
  }
  return out;
}

Matrix SyntheticTeachers::teacher_outputs(const Matrix& features) const {
  if (features.cols() != spec_.feature_dim) throw ConfigError("synthetic: feature dimension mismatch");
  return (raw_outputs(features).rowwise() - raw_mean_) * whitening_;
}

Matrix SyntheticTeachers::latent_scores(const Matrix& features) const {
  const Matrix whitened = teacher_outputs(features);
  const double rho = spec_.relatedness;
  Matrix scores(features.rows(), Index(spec_.task_names.size()));
  for (Index t = 0; t < scores.cols(); ++t) {
    scores.col(t) = rho * whitened.col(0) + (1.0 - rho) * whitened.col(t + 1);
  }
  return scores;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  const SyntheticTeachers teachers(spec);
  const Index total = std::accumulate(spec.counts.begin(), spec.counts.end(), Index(0));
  Rng feature_rng(mix_seed(spec.seed, 0xfea));
  Rng noise_rng(mix_seed(spec.seed, 0x9015e));
  const Matrix features = standard_normal(total, spec.feature_dim, feature_rng);
  Matrix scores = teachers.latent_scores(features);
  scores += standard_normal(total, scores.cols(), noise_rng) * spec.noise_std;

  // Neutral names: synthetic features are unbounded, unlike composition fractions.
  std::vector<std::string> feature_names;
  for (Index c = 0; c < spec.feature_dim; ++c) feature_names.push_back("x" + std::to_string(c));
  DatasetBuilder builder(feature_names, spec.task_names, spec.task_kinds);
  builder.reserve(total);
  Index start = 0;
  for (std::size_t t = 0; t < spec.counts.size(); ++t) {
    const Index count = spec.counts[t];
    std::vector<double> labels(static_cast<std::size_t>(count));
    if (spec.task_kinds[t] == TaskKind::kClassification) {
      std::vector<Index> order(static_cast<std::size_t>(count));
      std::iota(order.begin(), order.end(), Index(0));
      std::stable_sort(order.begin(), order.end(),
                       [&](Index a, Index b) { return scores(start + a, Index(t)) > scores(start + b, Index(t)); });
      const auto positives = Index(std::llround(spec.classification_balance * double(count)));
      for (Index k = 0; k < count; ++k) labels[std::size_t(order[std::size_t(k)])] = k < positives ? 1.0 : 0.0;
    } else {
      for (Index k = 0; k < count; ++k) labels[std::size_t(k)] = scores(start + k, Index(t));
    }
    std::vector<std::optional<double>> targets(spec.counts.size());
    for (Index k = 0; k < count; ++k) {
      std::fill(targets.begin(), targets.end(), std::nullopt);
      targets[t] = labels[std::size_t(k)];
      const auto row = features.row(start + k);
      builder.add(std::span<const double>(row.data(), std::size_t(row.size())), targets);
    }
    start += count;
  }
  return builder.build();
}

}  // namespace mtlbench
