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

#include "mtlbench/core/types.hpp"

namespace mtlbench {

struct SchedulerConfig {
  double factor = 0.5;
  Index patience = 10;
  double min_lr = 1e-6;
  /// Absolute improvement a validation loss must make over the best so far.
  double threshold = 1e-4;

  void validate() const;
  bool operator==(const SchedulerConfig&) const = default;
};

/// Multiplies the learning rate by `factor` once `patience` consecutive
/// epochs pass without improvement, then restarts the count.
class ReduceLrOnPlateau {
 public:
  ReduceLrOnPlateau(const SchedulerConfig& config, double initial_lr);

  /// Feed one validation loss per epoch; returns the learning rate to use next.
  double step(double validation_loss);
  double learning_rate() const { return lr_; }
  Index bad_epochs() const { return bad_epochs_; }

 private:
  SchedulerConfig config_;
  double lr_;
  double best_;
  Index bad_epochs_ = 0;
};

enum class StopDecision { kContinue, kStop };

/// Tracks the best validation loss (strict improvement). The caller takes a
/// snapshot whenever `improved()` is true after `step`.
class EarlyStopping {
 public:
  explicit EarlyStopping(Index patience);

  StopDecision step(double validation_loss);
  bool improved() const { return improved_; }
  double best_loss() const { return best_; }
  Index epochs_since_improvement() const { return since_improvement_; }

 private:
  Index patience_;
  double best_;
  Index since_improvement_ = 0;
  bool improved_ = false;
};

}  // namespace mtlbench
