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

#include "mtlbench/data/batch.hpp"

#include <algorithm>
#include <numeric>

#include "mtlbench/core/errors.hpp"

namespace mtlbench {

Batch gather_batch(const Dataset& dataset, std::span<const Index> rows) {
  Batch batch;
  batch.rows.assign(rows.begin(), rows.end());
  batch.features.resize(Index(rows.size()), dataset.feature_dim());
  batch.targets.resize(Index(rows.size()), Index(dataset.num_tasks()));
  batch.mask.resize(Index(rows.size()), Index(dataset.num_tasks()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    batch.features.row(Index(i)) = dataset.features().row(rows[i]);
    batch.targets.row(Index(i)) = dataset.targets().row(rows[i]);
    batch.mask.row(Index(i)) = dataset.mask().row(rows[i]);
  }
  return batch;
}

BatchIterator::BatchIterator(const Dataset& dataset, Index batch_size, std::uint64_t seed, bool shuffle)
    : dataset_(&dataset), batch_size_(batch_size), seed_(seed), shuffle_(shuffle) {
  if (batch_size < 1) throw ArgumentError("batch_iterator: batch size must be at least 1");
}

Index BatchIterator::batches_per_epoch() const {
  return (dataset_->size() + batch_size_ - 1) / batch_size_;
}

std::vector<std::vector<Index>> BatchIterator::epoch_order(Index epoch) const {
  std::vector<Index> order(std::size_t(dataset_->size()));
  std::iota(order.begin(), order.end(), Index(0));
  if (shuffle_) {
    Rng rng(mix_seed(seed_, std::uint64_t(epoch)));
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<std::vector<Index>> batches;
  for (std::size_t start = 0; start < order.size(); start += std::size_t(batch_size_)) {
    const std::size_t stop = std::min(order.size(), start + std::size_t(batch_size_));
    batches.emplace_back(order.begin() + std::ptrdiff_t(start), order.begin() + std::ptrdiff_t(stop));
  }
  return batches;
}

std::vector<Batch> BatchIterator::epoch(Index epoch) const {
  std::vector<Batch> batches;
  for (const auto& rows : epoch_order(epoch)) batches.push_back(gather_batch(*dataset_, rows));
  return batches;
}

}  // namespace mtlbench
