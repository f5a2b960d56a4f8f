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

#include <filesystem>
#include <string>
#include <vector>

#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

struct TargetColumn {
  std::string name;
  TaskKind kind = TaskKind::kRegression;
};

/// Column layout of an input CSV. Every feature column must be present;
/// target columns are optional individually but at least one is required.
struct CsvSchema {
  std::vector<std::string> features;
  std::vector<TargetColumn> targets;
  /// Features that must be >= 0 (atomic fractions).
  std::vector<std::string> nonnegative;

  /// Alloy layout: 15 composition fractions, 6 descriptors, and the
  /// resistivity / hardness / amorphous targets.
  static CsvSchema alloy();
  /// Sidecar format, one entry per line:
  ///   feature <name> [nonnegative]
  ///   target <name> regression|classification
  static CsvSchema load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// Reads a union-dataset CSV. Empty target cells are missing labels. Any
/// malformed row aborts the load; the error lists every offending data row
/// (1-based, header excluded).
Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema = CsvSchema::alloy());

/// Writes features then targets; missing labels become empty cells.
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Shortest round-trip decimal rendering, independent of the global locale.
std::string format_double(double value);

}  // namespace mtlbench
