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
#include <filesystem>
#include <string>
#include <vector>

#include "mtlbench/data/split.hpp"
#include "mtlbench/data/synthetic.hpp"
#include "mtlbench/train/trainer.hpp"

namespace mtlbench {

enum class DataSource { kSynthetic, kCsv };

struct DataConfig {
  DataSource source = DataSource::kSynthetic;
  std::filesystem::path csv;
  /// Optional schema sidecar; the alloy layout when empty.
  std::filesystem::path schema;
  SyntheticSpec synthetic;
  SplitRatios ratios;
  std::uint64_t split_seed = 42;
};

struct ExperimentConfig {
  std::vector<ModelKind> models{ModelKind::kIndependent, ModelKind::kShared, ModelKind::kStructured};
  std::string majority_task = "resistivity";
  std::string minority_task;  // empty: fewest labels
  std::vector<Index> counts;
  ModelKind sweep_model = ModelKind::kShared;
  ModelKind conflict_model = ModelKind::kShared;
  std::string source_task = "resistivity";
  std::string target_task = "hardness";
  bool predictions = true;
  bool histories = true;
  std::vector<std::string> formats{"json", "csv"};
};

/// Everything a run needs. The canonical text form (see to_config_text) is
/// embedded in every report and reproduces the run exactly.
struct RunConfig {
  DataConfig data;
  TrainConfig train;
  ExperimentConfig experiment;
};

/// Grammar, one item per line:
///   # comment        (also after a value)
///   [section]        data | train | model | experiment
///   key = value      lists are comma separated
/// Unknown sections or keys, duplicate keys and bad values are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Applies "section.key=value".
void apply_override(RunConfig& config, const std::string& assignment);

/// Every key with its effective value, in fixed order.
std::string to_config_text(const RunConfig& config);

void validate(const RunConfig& config);

}  // namespace mtlbench
