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

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "mtlbench/core/layers.hpp"

namespace mtlbench {

template <typename Scalar>
Scalar relative_error(Scalar analytic, Scalar numeric) {
  const Scalar denom = std::max({std::abs(analytic), std::abs(numeric), Scalar(1e-8)});
  return std::abs(analytic - numeric) / denom;
}

template <typename Scalar>
struct GradCheckResult {
  Scalar max_relative_error = Scalar(0);
  std::size_t worst_parameter = 0;
  Index worst_entry = 0;
  Scalar worst_analytic = Scalar(0);
  Scalar worst_numeric = Scalar(0);
  std::size_t entries_checked = 0;
};

namespace detail {

template <typename Scalar, typename LossFn>
void check_entry(GradCheckResult<Scalar>& result, std::size_t k, Parameter<Scalar>& p, Index i, LossFn& loss,
                 Scalar step) {
  Scalar& slot = p.value.data()[i];
  const Scalar saved = slot;
  slot = saved + step;
  const Scalar plus = loss();
  slot = saved - step;
  const Scalar minus = loss();
  slot = saved;
  const Scalar numeric = (plus - minus) / (Scalar(2) * step);
  const Scalar analytic = p.grad.data()[i];
  const Scalar err = relative_error(analytic, numeric);
  ++result.entries_checked;
  if (err > result.max_relative_error || std::isnan(err)) {
    result.max_relative_error = err;
    result.worst_parameter = k;
    result.worst_entry = i;
    result.worst_analytic = analytic;
    result.worst_numeric = numeric;
  }
}

}  // namespace detail

/// Compares the gradients already stored in `params` against central
/// differences of `loss` (a nullary callable returning the scalar loss).
/// `loss` must be a pure function of the parameter values.
template <typename Scalar, typename LossFn>
GradCheckResult<Scalar> finite_diff_check(std::span<Parameter<Scalar>* const> params, LossFn&& loss,
                                          Scalar step = Scalar(1e-5)) {
  GradCheckResult<Scalar> result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Index i = 0; i < params[k]->value.size(); ++i) detail::check_entry(result, k, *params[k], i, loss, step);
  }
  return result;
}

/// Same, restricted to entries[k] (flat storage indices) of params[k].
template <typename Scalar, typename LossFn>
GradCheckResult<Scalar> finite_diff_check(std::span<Parameter<Scalar>* const> params,
                                          std::span<const std::vector<Index>> entries, LossFn&& loss,
                                          Scalar step = Scalar(1e-5)) {
  if (entries.size() != params.size()) throw ConfigError("finite_diff_check: one entry list per parameter");
  GradCheckResult<Scalar> result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Index i : entries[k]) {
      if (i < 0 || i >= params[k]->value.size()) throw ConfigError("finite_diff_check: entry out of range");
      detail::check_entry(result, k, *params[k], i, loss, step);
    }
  }
  return result;
}

}  // namespace mtlbench
