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

#include "mtlbench/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "mtlbench/core/adam.hpp"
#include "mtlbench/core/errors.hpp"
#include "mtlbench/data/csv.hpp"
#include "mtlbench/stats/metrics.hpp"

namespace mtlbench {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<MaskedLoss> output_losses(const Model& model, const Matrix& predictions, const Matrix& targets,
                                      const Matrix& mask, const TaskBinding& binding) {
  std::vector<MaskedLoss> losses;
  for (std::size_t k = 0; k < binding.columns.size(); ++k) {
    const Index c = Index(binding.columns[k]);
    losses.push_back(masked_loss(predictions.col(Index(k)), targets.col(c), mask.col(c),
                                 loss_kind_for(model.task_kinds()[k])));
  }
  return losses;
}

double headline_value(TaskKind kind, const Matrix& predictions, const Dataset& dataset, Index output,
                      std::size_t column) {
  const auto rows = dataset.labeled_rows(column);
  if (rows.size() < 2) return kNaN;
  Vector p(Index(rows.size())), y(Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p(Index(i)) = predictions(rows[i], output);
    y(Index(i)) = dataset.targets()(rows[i], Index(column));
  }
  return kind == TaskKind::kRegression ? r_squared(p, y) : roc_auc(p, y);
}

std::string describe_batch(const Batch& batch, const Matrix& predictions, std::span<const MaskedLoss> losses) {
  std::ostringstream out;
  out << "batch of " << batch.size() << " rows\n  task losses:";
  for (const auto& l : losses) out << ' ' << format_double(l.value) << " (n=" << l.labeled << ')';
  out << '\n';
  for (Index b = 0; b < batch.size(); ++b) {
    out << "  row " << batch.rows[std::size_t(b)] << " pred=[";
    for (Index k = 0; k < predictions.cols(); ++k) out << (k ? "," : "") << format_double(predictions(b, k));
    out << "] target=[";
    for (Index t = 0; t < batch.targets.cols(); ++t) {
      out << (t ? "," : "") << (batch.mask(b, t) != 0.0 ? format_double(batch.targets(b, t)) : "-");
    }
    out << "] features=[";
    for (Index j = 0; j < batch.features.cols(); ++j) out << (j ? "," : "") << format_double(batch.features(b, j));
    out << "]\n";
  }
  return out.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  // Batch normalization needs two rows per training batch.
  if (batch_size < 2) throw ConfigError("batch_size must be at least 2");
  if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
  if (early_stop_patience < 1) throw ConfigError("early_stop_patience must be at least 1");
  if (!(weight_decay >= 0.0)) throw ConfigError("weight_decay must be non-negative");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (conflict_stride < 1) throw ConfigError("conflict_stride must be at least 1");
  if (workers < 0) throw ConfigError("workers must be non-negative");
  scheduler.validate();
  regularization.validate();
  TaskWeights{task_weights}.validate();
}

TaskBinding TaskBinding::all_tasks(const Dataset& train, const std::vector<double>& explicit_weights) {
  TaskBinding binding;
  std::vector<Index> counts;
  for (std::size_t t = 0; t < train.num_tasks(); ++t) {
    binding.columns.push_back(t);
    counts.push_back(train.label_count(t));
  }
  if (explicit_weights.empty()) {
    binding.weights = TaskWeights::inverse_frequency(counts).values;
  } else {
    if (explicit_weights.size() != train.num_tasks()) {
      throw ConfigError("task_weights: expected " + std::to_string(train.num_tasks()) + " values");
    }
    binding.weights = explicit_weights;
  }
  return binding;
}

TaskBinding TaskBinding::single(std::size_t column) { return TaskBinding{{column}, {1.0}}; }

double TrainHistory::best_validation_loss() const {
  if (best_epoch < 1) return kNaN;
  return epochs[std::size_t(best_epoch - 1)].validation_loss;
}

void TrainHistory::write_csv(std::ostream& out) const {
  out << "epoch,train_loss,validation_loss,learning_rate";
  for (const auto& name : output_names) out << ',' << name << "_val_loss," << name << "_val_metric";
  out << '\n';
  for (const EpochRecord& e : epochs) {
    out << e.epoch << ',' << format_double(e.train_loss) << ',' << format_double(e.validation_loss) << ','
        << format_double(e.learning_rate);
    for (std::size_t k = 0; k < e.task_validation_loss.size(); ++k) {
      out << ',' << format_double(e.task_validation_loss[k]) << ',' << format_double(e.task_validation_metric[k]);
    }
    out << '\n';
  }
}

bool TrainHistory::operator==(const TrainHistory& other) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  if (output_names != other.output_names || best_epoch != other.best_epoch ||
      stopped_epoch != other.stopped_epoch || early_stopped != other.early_stopped ||
      epochs.size() != other.epochs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const EpochRecord& a = epochs[i];
    const EpochRecord& b = other.epochs[i];
    if (a.epoch != b.epoch || !same(a.train_loss, b.train_loss) || !same(a.validation_loss, b.validation_loss) ||
        !same(a.learning_rate, b.learning_rate) || a.task_validation_loss.size() != b.task_validation_loss.size()) {
      return false;
    }
    for (std::size_t k = 0; k < a.task_validation_loss.size(); ++k) {
      if (!same(a.task_validation_loss[k], b.task_validation_loss[k]) ||
          !same(a.task_validation_metric[k], b.task_validation_metric[k])) {
        return false;
      }
    }
  }
  return true;
}

Matrix predict(Model& model, const Dataset& dataset) { return model.forward(dataset.features(), Mode::kEval); }

ValidationResult evaluate_loss(Model& model, const Dataset& dataset, const TaskBinding& binding,
                               const RegularizationConfig& regularization) {
  if (dataset.size() == 0) throw DataError("evaluate_loss: empty dataset");
  const Matrix predictions = predict(model, dataset);
  ValidationResult result;
  result.task_losses = output_losses(model, predictions, dataset.targets(), dataset.mask(), binding);
  result.loss = combined_mtl_loss(result.task_losses, TaskWeights{binding.weights});
  if (model.has_relations()) result.loss += relation_penalty(model.relation_matrix(), regularization);
  for (std::size_t k = 0; k < binding.columns.size(); ++k) {
    result.task_metrics.push_back(
        headline_value(model.task_kinds()[k], predictions, dataset, Index(k), binding.columns[k]));
  }
  return result;
}

TrainHistory train(Model& model, const Dataset& train_set, const Dataset& validation_set, const TaskBinding& binding,
                   const TrainConfig& config, std::uint64_t seed, const TrainHooks& hooks) {
  config.validate();
  if (binding.columns.size() != model.num_outputs() || binding.weights.size() != model.num_outputs()) {
    throw ConfigError("train: task binding must cover every model output");
  }
  for (std::size_t k = 0; k < binding.columns.size(); ++k) {
    if (binding.columns[k] >= train_set.num_tasks()) throw ConfigError("train: task column out of range");
    if (train_set.task_kinds()[binding.columns[k]] != model.task_kinds()[k]) {
      throw ConfigError("train: task kind of output " + std::to_string(k) + " does not match the dataset");
    }
  }
  if (train_set.size() < 2) throw DataError("train: the training split needs at least two samples");
  const TaskWeights weights{binding.weights};
  weights.validate();

  TrainHistory history;
  for (std::size_t c : binding.columns) history.output_names.push_back(train_set.task_names()[c]);

  std::vector<Parameter<double>*> params;
  for (const auto& p : model.trainable_parameters()) params.push_back(p.parameter);
  AdamState<double> adam;
  ReduceLrOnPlateau scheduler(config.scheduler, config.learning_rate);
  EarlyStopping stopper(config.early_stop_patience);
  ModelSnapshot best = take_snapshot(model);
  const BatchIterator batches(train_set, config.batch_size, seed, true);

  Index step = 0;
  for (Index epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const double lr = scheduler.learning_rate();
    auto order = batches.epoch_order(epoch);
    // Train-mode batch normalization cannot take a single row.
    if (order.size() > 1 && order.back().size() == 1) {
      order[order.size() - 2].push_back(order.back().front());
      order.pop_back();
    }
    double loss_sum = 0.0;
    for (const auto& rows : order) {
      const Batch batch = gather_batch(train_set, rows);
      model.zero_grad();
      const Matrix predictions = model.forward(batch.features, Mode::kTrain);
      const std::vector<MaskedLoss> losses =
          output_losses(model, predictions, batch.targets, batch.mask, binding);
      double loss = combined_mtl_loss(losses, weights);
      Matrix relations;
      if (model.has_relations()) {
        relations = model.relation_matrix();
        loss += relation_penalty(relations, config.regularization);
      }
      if (!std::isfinite(loss)) {
        throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + ", step " +
                           std::to_string(step) + "\n" + describe_batch(batch, predictions, losses));
      }
      if (hooks.before_backward) {
        hooks.before_backward(model, StepContext{epoch, step, &batch, &predictions, losses});
        model.zero_grad();
      }
      Matrix d_predictions(predictions.rows(), predictions.cols());
      for (std::size_t k = 0; k < losses.size(); ++k) {
        d_predictions.col(Index(k)) = weights.values[k] * losses[k].gradient;
      }
      model.backward(d_predictions);
      if (model.has_relations()) {
        model.backward_relations(relation_penalty_gradient(relations, config.regularization));
      }
      adam_step<double>(params, adam, lr, config.weight_decay);
      loss_sum += loss;
      ++step;
    }

    const ValidationResult validation = evaluate_loss(model, validation_set, binding, config.regularization);
    if (!std::isfinite(validation.loss)) {
      throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));
    }
    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / double(order.size());
    record.validation_loss = validation.loss;
    record.learning_rate = lr;
    for (const auto& l : validation.task_losses) record.task_validation_loss.push_back(l.value);
    record.task_validation_metric = validation.task_metrics;
    history.epochs.push_back(std::move(record));
    history.stopped_epoch = epoch;

    scheduler.step(validation.loss);
    const StopDecision decision = stopper.step(validation.loss);
    if (stopper.improved()) {
      best = take_snapshot(model);
      history.best_epoch = epoch;
    }
    if (decision == StopDecision::kStop) {
      history.early_stopped = true;
      break;
    }
  }
  restore_snapshot(model, best);
  return history;
}

}  // namespace mtlbench
