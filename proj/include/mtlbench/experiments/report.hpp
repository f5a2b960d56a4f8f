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
#include <vector>

#include "mtlbench/stats/aggregate.hpp"
#include "mtlbench/stats/ttest.hpp"
#include "mtlbench/train/trainer.hpp"

namespace mtlbench {

inline constexpr const char* kCodeVersion = "mtlbench 0.1.0";

struct TTestRow {
  std::string task;
  std::string metric;
  std::string model_a;
  std::string model_b;
  TTestResult result;

  bool operator==(const TTestRow&) const = default;
};

struct SweepPoint {
  Index majority_count = 0;  // labeled majority samples before splitting
  /// Training-split labeled counts, majority over minority.
  double ratio = 0.0;
  std::string minority_task;
  std::vector<MetricRecord> records;  // minority task, one per seed and metric
  std::vector<AggregateRow> aggregates;

  bool operator==(const SweepPoint&) const = default;
};

/// Cosine between two tasks' backbone gradients, pooled over steps and seeds.
/// A pair with task_a == task_b is the self-pair harness check.
struct CosineStat {
  std::string task_a;
  std::string task_b;
  double mean = 0.0;
  double std = 0.0;
  Index samples = 0;  // 0 means the pair never shared a batch

  bool operator==(const CosineStat&) const = default;
};

/// w_ij: influence of task `source` (j) on task `target` (i).
struct RelationStat {
  std::string target;
  std::string source;
  double mean = 0.0;
  double std = 0.0;
  Index n_seeds = 0;

  bool operator==(const RelationStat&) const = default;
};

struct PredictionDump {
  std::string model;
  std::string task;
  std::uint64_t seed = 0;
  std::vector<Index> rows;  // test-split row indices
  std::vector<double> predictions;
  std::vector<double> targets;

  bool operator==(const PredictionDump&) const = default;
};

struct HistoryDump {
  std::string model;  // "independent:<task>" for per-task baselines
  std::uint64_t seed = 0;
  TrainHistory history;

  bool operator==(const HistoryDump&) const = default;
};

struct Provenance {
  std::string code_version = kCodeVersion;
  std::string started;
  std::string finished;
  std::vector<std::uint64_t> seeds;

  bool operator==(const Provenance&) const = default;
};

struct ExperimentReport {
  std::string experiment;  // compare | sweep | conflict | transfer | relations
  std::string config_snapshot;
  Provenance provenance;
  std::vector<std::string> task_names;
  std::vector<TaskKind> task_kinds;
  std::vector<MetricRecord> records;
  std::vector<AggregateRow> aggregates;
  std::vector<TTestRow> ttests;
  std::vector<SweepPoint> sweep;
  std::vector<CosineStat> cosines;
  std::vector<RelationStat> relations;
  std::vector<PredictionDump> predictions;
  std::vector<HistoryDump> histories;
  std::vector<std::string> warnings;

  bool operator==(const ExperimentReport& other) const;
};

/// Deterministic field order; NaN and infinities are written as null, "inf"
/// or "-inf" and read back as such.
std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

std::string utc_timestamp();

}  // namespace mtlbench
