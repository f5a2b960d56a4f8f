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

#include "mtlbench/train/schedule.hpp"

#include <algorithm>
#include <limits>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

void SchedulerConfig::validate() const {
  if (!(factor > 0.0 && factor < 1.0)) throw ConfigError("scheduler factor must lie in (0, 1)");
  if (patience < 1) throw ConfigError("scheduler patience must be at least 1");
  if (!(min_lr >= 0.0)) throw ConfigError("scheduler min_lr must be non-negative");
  if (!(threshold >= 0.0)) throw ConfigError("scheduler threshold must be non-negative");
}

ReduceLrOnPlateau::ReduceLrOnPlateau(const SchedulerConfig& config, double initial_lr)
    : config_(config), lr_(initial_lr), best_(std::numeric_limits<double>::infinity()) {
  config_.validate();
}

double ReduceLrOnPlateau::step(double validation_loss) {
  if (validation_loss < best_ - config_.threshold) {
    best_ = validation_loss;
    bad_epochs_ = 0;
    return lr_;
  }
  if (++bad_epochs_ >= config_.patience) {
    lr_ = std::max(lr_ * config_.factor, config_.min_lr);
    bad_epochs_ = 0;
  }
  return lr_;
}

EarlyStopping::EarlyStopping(Index patience) : patience_(patience), best_(std::numeric_limits<double>::infinity()) {
  if (patience < 1) throw ConfigError("early-stop patience must be at least 1");
}

StopDecision EarlyStopping::step(double validation_loss) {
  improved_ = validation_loss < best_;
  if (improved_) {
    best_ = validation_loss;
    since_improvement_ = 0;
    return StopDecision::kContinue;
  }
  ++since_improvement_;
  return since_improvement_ >= patience_ ? StopDecision::kStop : StopDecision::kContinue;
}

}  // namespace mtlbench
