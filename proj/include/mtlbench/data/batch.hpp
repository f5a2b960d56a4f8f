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
#include <vector>

#include "mtlbench/data/dataset.hpp"

namespace mtlbench {

struct Batch {
  Matrix features;
  Matrix targets;
  Matrix mask;
  std::vector<Index> rows;

  Index size() const { return features.rows(); }
};

Batch gather_batch(const Dataset& dataset, std::span<const Index> rows);

/// Minibatch schedule over a dataset. Each epoch is shuffled with a seed
/// derived from (seed, epoch); the final partial batch is kept.
class BatchIterator {
 public:
  BatchIterator(const Dataset& dataset, Index batch_size, std::uint64_t seed, bool shuffle);

  std::vector<std::vector<Index>> epoch_order(Index epoch) const;
  std::vector<Batch> epoch(Index epoch) const;
  Index batches_per_epoch() const;

 private:
  const Dataset* dataset_;
  Index batch_size_;
  std::uint64_t seed_;
  bool shuffle_;
};

}  // namespace mtlbench
