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

#include <span>

#include "mtlbench/core/types.hpp"

namespace mtlbench {

struct TTestResult {
  double t_statistic = 0.0;
  Index degrees_of_freedom = 0;
  double p_value = 1.0;
  bool significant = false;
  /// Zero-variance differences: p is 0 (nonzero mean) or 1 (zero mean) and
  /// t is +-inf or 0.
  bool degenerate = false;
  double mean_difference = 0.0;
};

/// Two-sided paired test on d = a - b with the sample standard deviation.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// I_x(a, b) by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

}  // namespace mtlbench
