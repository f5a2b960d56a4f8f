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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;
};

struct DatasetSplits {
  Dataset train;
  Dataset validation;
  Dataset test;
  std::vector<Index> train_rows;
  std::vector<Index> validation_rows;
  std::vector<Index> test_rows;
  /// Mask-pattern groups that were too small to stratify.
  std::vector<std::string> warnings;
};

inline constexpr int kRegressionStrataBins = 10;

/// Splits each mask-pattern group independently. Within a group, samples are
/// stratified by class (classification) or by decile of the target
/// (regression), keyed on the group's first labeled task. Group totals are
/// validation = ceil(ratio * n), test = ceil(ratio * n), train = remainder;
/// per-stratum counts are apportioned by cumulative rounding.
DatasetSplits stratified_split(const Dataset& dataset, const SplitRatios& ratios, std::uint64_t seed);

/// Keeps `n` uniformly chosen samples labeled for `task` and every sample
/// without that label. Row order is preserved.
Dataset downsample_task(const Dataset& dataset, std::size_t task, Index n, std::uint64_t seed);

/// Per-split counts for a group of size n (exposed for tests).
std::array<Index, 3> split_counts(Index n, const SplitRatios& ratios);

}  // namespace mtlbench
