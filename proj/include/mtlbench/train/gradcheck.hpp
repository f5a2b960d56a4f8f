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

#include <cstdint>
#include <string>

#include "mtlbench/model/model.hpp"

namespace mtlbench {

inline constexpr double kGradCheckTolerance = 1e-4;

struct ModelGradCheckOptions {
  ArchitectureConfig architecture;
  Index batch_size = 6;
  /// Larger tensors are checked on a random subset of this many entries.
  Index max_entries_per_parameter = 24;
  double step = 1e-4;
  std::uint64_t seed = 2024;
};

struct ModelGradCheckReport {
  ModelKind kind = ModelKind::kShared;
  double max_relative_error = 0.0;
  std::string worst_parameter;
  Index worst_entry = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t entries_checked = 0;
  double seconds = 0.0;

  bool passed() const { return max_relative_error < kGradCheckTolerance; }
};

/// Checks the analytic gradient of the full training loss (weighted masked
/// losses, plus the relation penalty for the structured model) against
/// central differences. Runs in eval mode, so dropout is off and batch
/// normalization uses (randomized) running statistics. The structured model
/// is checked with full fusion backprop, the only setting in which its
/// analytic gradient is the true derivative.
ModelGradCheckReport model_gradcheck(ModelKind kind, const ModelGradCheckOptions& options = {});

}  // namespace mtlbench
