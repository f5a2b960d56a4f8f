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

#include "mtlbench/stats/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/log.hpp"

namespace mtlbench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_pair(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b, const char* what) {
  if (a.size() == 0) throw ArgumentError(std::string(what) + ": empty input");
  if (a.size() != b.size()) throw ArgumentError(std::string(what) + ": inputs differ in length");
}

}  // namespace

double r_squared(const Eigen::Ref<const Vector>& predictions, const Eigen::Ref<const Vector>& targets) {
  check_pair(predictions, targets, "r_squared");
  const double mean = targets.mean();
  const double sst = (targets.array() - mean).square().sum();
  if (sst == 0.0) return kNaN;
  const double sse = (predictions - targets).squaredNorm();
  return 1.0 - sse / sst;
}

RegressionMetrics regression_metrics(const Eigen::Ref<const Vector>& predictions,
                                     const Eigen::Ref<const Vector>& targets) {
  check_pair(predictions, targets, "regression_metrics");
  const Vector error = predictions - targets;
  const double n = double(error.size());
  RegressionMetrics m;
  m.rmse = std::sqrt(error.squaredNorm() / n);
  m.mae = error.cwiseAbs().sum() / n;
  m.r2 = r_squared(predictions, targets);
  if (std::isnan(m.r2)) log_warning("r2 is undefined for constant targets; reported as NaN");
  return m;
}

double roc_auc(const Eigen::Ref<const Vector>& scores, const Eigen::Ref<const Vector>& labels) {
  check_pair(scores, labels, "roc_auc");
  const Index n = scores.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return scores(a) < scores(b); });
  double positive_rank_sum = 0.0;
  Index positives = 0;
  for (Index k = 0; k < n;) {
    Index end = k;
    while (end < n && scores(order[std::size_t(end)]) == scores(order[std::size_t(k)])) ++end;
    const double rank = 0.5 * double(k + 1 + end);  // mean of ranks k+1 .. end
    for (Index r = k; r < end; ++r) {
      if (labels(order[std::size_t(r)]) == 1.0) {
        positive_rank_sum += rank;
        ++positives;
      }
    }
    k = end;
  }
  const Index negatives = n - positives;
  if (positives == 0 || negatives == 0) return kNaN;
  const double p = double(positives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * double(negatives));
}

ClassificationMetrics classification_metrics(const Eigen::Ref<const Vector>& probabilities,
                                             const Eigen::Ref<const Vector>& labels, double threshold) {
  check_pair(probabilities, labels, "classification_metrics");
  Index tp = 0, fp = 0, fn = 0, tn = 0;
  for (Index i = 0; i < labels.size(); ++i) {
    const double y = labels(i);
    if (y != 0.0 && y != 1.0) throw ArgumentError("classification_metrics: labels must be 0 or 1");
    const bool predicted = probabilities(i) >= threshold;
    if (predicted) {
      (y == 1.0 ? tp : fp) += 1;
    } else {
      (y == 1.0 ? fn : tn) += 1;
    }
  }
  ClassificationMetrics m;
  m.accuracy = double(tp + tn) / double(labels.size());
  m.recall = tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn);
  const double precision = tp + fp == 0 ? 0.0 : double(tp) / double(tp + fp);
  m.f1 = precision + m.recall == 0.0 ? 0.0 : 2.0 * precision * m.recall / (precision + m.recall);
  m.auc = roc_auc(probabilities, labels);
  if (std::isnan(m.auc)) log_warning("auc is undefined with a single class present; reported as NaN");
  return m;
}

std::vector<std::pair<std::string, double>> task_metrics(TaskKind kind, const Eigen::Ref<const Vector>& predictions,
                                                         const Eigen::Ref<const Vector>& targets) {
  if (kind == TaskKind::kRegression) {
    const RegressionMetrics m = regression_metrics(predictions, targets);
    return {{"rmse", m.rmse}, {"mae", m.mae}, {"r2", m.r2}};
  }
  const ClassificationMetrics m = classification_metrics(predictions, targets);
  return {{"accuracy", m.accuracy}, {"f1", m.f1}, {"auc", m.auc}, {"recall", m.recall}};
}

std::string headline_metric(TaskKind kind) { return kind == TaskKind::kRegression ? "r2" : "auc"; }

}  // namespace mtlbench
