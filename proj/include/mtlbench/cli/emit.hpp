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

#include "mtlbench/experiments/report.hpp"

namespace mtlbench {

/// json: report.json. csv: metrics.csv (task,model,metric,mean,std,n_seeds),
/// records.csv, and ttests.csv / relations.csv / sweep.csv / cosines.csv when
/// the report holds that study. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const ExperimentReport& report,
                                               const std::vector<std::string>& formats,
                                               const std::filesystem::path& out_dir);

/// Per-figure CSVs under out_dir: training_curves, residuals, confusion,
/// sweep_curve, cosine_matrix, transfer_bars. Studies absent from the
/// report are skipped with a notice on stderr.
std::vector<std::filesystem::path> emit_plot_data(const ExperimentReport& report,
                                                  const std::filesystem::path& out_dir);

/// Creates <root>/<experiment>-<timestamp>, adding -2, -3, ... if taken.
std::filesystem::path make_run_directory(const std::filesystem::path& root, const std::string& experiment);

}  // namespace mtlbench
