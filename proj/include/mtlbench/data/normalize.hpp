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

#include <vector>

#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

struct NormalizationStats {
  RowVector mean;
  RowVector std;
  /// Columns whose training variance was zero; their std is forced to 1.
  std::vector<bool> degenerate;
};

/// Per-column mean and population standard deviation of the training split.
NormalizationStats fit_normalize(const Dataset& train);
Dataset apply_normalize(const Dataset& dataset, const NormalizationStats& stats);

/// Affine standardization of regression targets; classification tasks keep
/// scale 1 / offset 0.
struct TargetScaling {
  std::vector<double> mean;
  std::vector<double> std;
};

TargetScaling fit_target_scaling(const Dataset& train);
Dataset apply_target_scaling(const Dataset& dataset, const TargetScaling& scaling);

}  // namespace mtlbench
