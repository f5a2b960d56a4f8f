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

#include "mtlbench/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/log.hpp"

namespace mtlbench {
namespace {

Index ceil_share(double ratio, Index n) {
  return Index(std::ceil(ratio * double(n) - 1e-9));
}

/// Split label per position such that every prefix stays within one sample
/// of its ideal share (largest-deficit sequencing).
std::vector<int> spread_labels(const std::array<Index, 3>& counts) {
  const Index n = counts[0] + counts[1] + counts[2];
  std::vector<int> labels(std::size_t(n), 0);
  std::array<Index, 3> assigned{0, 0, 0};
  for (Index k = 0; k < n; ++k) {
    int best = -1;
    double best_deficit = -1e300;
    for (int s = 0; s < 3; ++s) {
      if (assigned[s] >= counts[s]) continue;
      const double deficit = double(counts[s]) * double(k + 1) / double(n) - double(assigned[s]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = s;
      }
    }
    labels[std::size_t(k)] = best;
    ++assigned[best];
  }
  return labels;
}

}  // namespace

std::array<Index, 3> split_counts(Index n, const SplitRatios& ratios) {
  Index validation = ceil_share(ratios.validation, n);
  Index test = ceil_share(ratios.test, n);
  while (n > 0 && n - validation - test < 1) {
    if (test >= validation && test > 0) {
      --test;
    } else {
      --validation;
    }
  }
  return {n - validation - test, validation, test};
}

DatasetSplits stratified_split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed) {
  if (std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9 || ratios.train <= 0.0 ||
      ratios.validation < 0.0 || ratios.test < 0.0) {
    throw ArgumentError("stratified_split: ratios must be non-negative and sum to 1");
  }
  // Group rows by mask pattern.
  std::map<std::string, std::vector<Index>> groups;
  for (Index r = 0; r < dataset.size(); ++r) {
    std::string key(dataset.num_tasks(), '0');
    for (std::size_t t = 0; t < dataset.num_tasks(); ++t) key[t] = dataset.has_label(r, t) ? '1' : '0';
    groups[key].push_back(r);
  }

  DatasetSplits splits;
  std::uint64_t group_id = 0;
  for (auto& [pattern, rows] : groups) {
    Rng rng(mix_seed(seed, group_id++));
    const Index n = Index(rows.size());

    // Strata keyed on the first labeled task of the pattern.
    std::vector<std::vector<Index>> strata;
    const auto first = pattern.find('1');
    if (first == std::string::npos) {
      strata.push_back(rows);
    } else {
      const std::size_t task = first;
      const bool classification = dataset.task_kinds()[task] == TaskKind::kClassification;
      const Index bins = classification ? 2 : kRegressionStrataBins;
      if (n < bins) {
        const std::string message = "stratified_split: group " + pattern + " has " + std::to_string(n) +
                                    " samples, fewer than " + std::to_string(bins) + " strata; split unstratified";
        splits.warnings.push_back(message);
        log_warning(message);
        strata.push_back(rows);
      } else if (classification) {
        strata.resize(2);
        for (Index r : rows) strata[dataset.targets()(r, Index(task)) > 0.5 ? 1 : 0].push_back(r);
      } else {
        std::vector<Index> ordered = rows;
        std::stable_sort(ordered.begin(), ordered.end(), [&](Index a, Index b) {
          return dataset.targets()(a, Index(task)) < dataset.targets()(b, Index(task));
        });
        strata.resize(std::size_t(bins));
        for (Index i = 0; i < n; ++i) strata[std::size_t(i * bins / n)].push_back(ordered[std::size_t(i)]);
      }
    }

    std::vector<Index> sequence;
    sequence.reserve(rows.size());
    for (auto& stratum : strata) {
      std::shuffle(stratum.begin(), stratum.end(), rng);
      sequence.insert(sequence.end(), stratum.begin(), stratum.end());
    }
    const auto labels = spread_labels(split_counts(n, ratios));
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      auto& target = labels[i] == 0 ? splits.train_rows : labels[i] == 1 ? splits.validation_rows : splits.test_rows;
      target.push_back(sequence[i]);
    }
  }
  std::sort(splits.train_rows.begin(), splits.train_rows.end());
  std::sort(splits.validation_rows.begin(), splits.validation_rows.end());
  std::sort(splits.test_rows.begin(), splits.test_rows.end());
  splits.train = dataset.subset(splits.train_rows);
  splits.validation = dataset.subset(splits.validation_rows);
  splits.test = dataset.subset(splits.test_rows);
  return splits;
}

Dataset downsample_task(const Dataset& dataset, std::size_t task, Index n, std::uint64_t seed) {
  if (task >= dataset.num_tasks()) throw ArgumentError("downsample_task: task index out of range");
  std::vector<Index> labeled = dataset.labeled_rows(task);
  if (n < 1 || n > Index(labeled.size())) {
    throw ArgumentError("downsample_task: requested " + std::to_string(n) + " samples of task '" +
                        dataset.task_names()[task] + "', which has " + std::to_string(labeled.size()));
  }
  Rng rng(mix_seed(seed, 0xd05a));
  std::shuffle(labeled.begin(), labeled.end(), rng);
  labeled.resize(std::size_t(n));
  std::vector<char> keep(std::size_t(dataset.size()), 1);
  for (Index r : dataset.labeled_rows(task)) keep[std::size_t(r)] = 0;
  for (Index r : labeled) keep[std::size_t(r)] = 1;
  std::vector<Index> rows;
  for (Index r = 0; r < dataset.size(); ++r) {
    if (keep[std::size_t(r)]) rows.push_back(r);
  }
  return dataset.subset(rows);
}

}  // namespace mtlbench
