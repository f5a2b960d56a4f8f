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

#include "mtlbench/stats/aggregate.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/core/log.hpp"

namespace mtlbench {

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("sample_mean: no values");
  // Shifted by the first value: exact for constant input, fewer rounding
  // errors when values share a large offset.
  const double shift = values.front();
  double total = 0.0;
  for (double v : values) total += v - shift;
  return shift + total / double(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mean = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / double(values.size() - 1));
}

std::vector<AggregateRow> aggregate_seeds(std::span<const MetricRecord> records, std::vector<std::string>* warnings) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::size_t> slot;
  std::vector<Key> order;
  std::vector<std::vector<double>> values;
  for (const MetricRecord& r : records) {
    Key key{r.task, r.model, r.metric};
    auto [it, inserted] = slot.emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      values.emplace_back();
    }
    values[it->second].push_back(r.value);
  }
  std::vector<AggregateRow> rows;
  for (std::size_t g = 0; g < order.size(); ++g) {
    const auto& [task, model, metric] = order[g];
    AggregateRow row{task, model, metric, sample_mean(values[g]), sample_std(values[g]), Index(values[g].size())};
    if (row.n_seeds == 1) {
      const std::string note = "single seed for " + task + "/" + model + "/" + metric + "; std reported as 0";
      log_warning(note);
      if (warnings) warnings->push_back(note);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> group_values(std::span<const MetricRecord> records, const std::string& task,
                                 const std::string& model, const std::string& metric) {
  std::vector<double> out;
  for (const MetricRecord& r : records) {
    if (r.task == task && r.model == model && r.metric == metric) out.push_back(r.value);
  }
  return out;
}

}  // namespace mtlbench
