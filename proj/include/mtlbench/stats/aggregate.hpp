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
#include <span>
#include <string>
#include <vector>

#include "mtlbench/core/types.hpp"

namespace mtlbench {

struct MetricRecord {
  std::string task;
  std::string model;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;

  bool operator==(const MetricRecord&) const = default;
};

struct AggregateRow {
  std::string task;
  std::string model;
  std::string metric;
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) deviation; 0 for a single record
  Index n_seeds = 0;

  bool operator==(const AggregateRow&) const = default;
};

double sample_mean(std::span<const double> values);
/// Sample standard deviation; 0 for fewer than two values.
double sample_std(std::span<const double> values);

/// Groups by (task, model, metric) in order of first appearance.
/// Single-record groups warn and, if `warnings` is given, append a note.
std::vector<AggregateRow> aggregate_seeds(std::span<const MetricRecord> records,
                                          std::vector<std::string>* warnings = nullptr);

/// Values of one (task, model, metric) group in record order.
std::vector<double> group_values(std::span<const MetricRecord> records, const std::string& task,
                                 const std::string& model, const std::string& metric);

}  // namespace mtlbench
