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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/model/checkpoint.hpp"
#include "mtlbench/model/independent.hpp"
#include "mtlbench/model/shared.hpp"
#include "mtlbench/model/structured.hpp"

namespace mtlbench {
namespace {

const std::vector<TaskKind> kThreeTasks{TaskKind::kRegression, TaskKind::kRegression, TaskKind::kClassification};

Matrix inputs(Index rows, std::uint64_t seed = 3) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(rows, 21);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return x;
}

TEST(Independent, ZeroFinalWeightsGiveBias) {
  IndependentModel model(TaskKind::kRegression, {}, 1);
  model.output_layer().layer().weights.value.setZero();
  model.output_layer().layer().bias.value(0, 0) = 0.25;
  const Matrix out = model.forward(inputs(7), Mode::kEval);
  EXPECT_TRUE((out.array() == 0.25).all());
}

TEST(Independent, ClassificationOutputIsProbability) {
  IndependentModel model(TaskKind::kClassification, {}, 2);
  const Matrix out = model.forward(inputs(50) * 10.0, Mode::kEval);
  EXPECT_TRUE((out.array() > 0.0).all() && (out.array() < 1.0).all());
}

TEST(Models, EvalForwardIsRepeatable) {
  for (ModelKind kind : {ModelKind::kIndependent, ModelKind::kShared, ModelKind::kStructured}) {
    const std::vector<TaskKind> kinds =
        kind == ModelKind::kIndependent ? std::vector<TaskKind>{TaskKind::kRegression} : kThreeTasks;
    auto model = make_model(kind, kinds, {}, 5);
    const Matrix x = inputs(9);
    EXPECT_EQ(model->forward(x, Mode::kEval), model->forward(x, Mode::kEval)) << to_string(kind);
  }
}

TEST(Models, SeededInitializationIsBitIdentical) {
  for (ModelKind kind : {ModelKind::kShared, ModelKind::kStructured}) {
    auto a = make_model(kind, kThreeTasks, {}, 11);
    auto b = make_model(kind, kThreeTasks, {}, 11);
    auto c = make_model(kind, kThreeTasks, {}, 12);
    const ModelSnapshot sa = take_snapshot(*a);
    const ModelSnapshot sb = take_snapshot(*b);
    const ModelSnapshot sc = take_snapshot(*c);
    EXPECT_EQ(sa.parameters, sb.parameters);
    EXPECT_NE(sa.parameters, sc.parameters);
  }
}

TEST(Models, IndependentTakesExactlyOneTask) {
  EXPECT_THROW(make_model(ModelKind::kIndependent, kThreeTasks, {}, 1), ConfigError);
}

TEST(Models, RejectsWrongFeatureDimension) {
  auto model = make_model(ModelKind::kShared, kThreeTasks, {}, 1);
  EXPECT_THROW(model->forward(Matrix::Zero(3, 20), Mode::kEval), ConfigError);
}

TEST(Shared, RepresentationWidth) {
  SharedMTLModel model(kThreeTasks, {}, 1);
  model.forward(inputs(4), Mode::kEval);
  EXPECT_EQ(model.representation().cols(), 128);
  EXPECT_EQ(model.representation().rows(), 4);
}

TEST(Shared, HeadPerturbationIsIsolated) {
  SharedMTLModel model(kThreeTasks, {}, 1);
  const Matrix x = inputs(6);
  const Matrix before = model.forward(x, Mode::kEval);
  for (auto& p : model.head_parameters(0)) p.parameter->value.array() += 0.1;
  const Matrix after = model.forward(x, Mode::kEval);
  EXPECT_NE(after.col(0), before.col(0));
  EXPECT_EQ(after.col(1), before.col(1));
  EXPECT_EQ(after.col(2), before.col(2));
}

TEST(Shared, BackbonePerturbationReachesEveryTask) {
  SharedMTLModel model(kThreeTasks, {}, 1);
  const Matrix x = inputs(6);
  const Matrix before = model.forward(x, Mode::kEval);
  for (auto& p : model.backbone_parameters()) p.parameter->value.array() += 0.05;
  const Matrix after = model.forward(x, Mode::kEval);
  for (Index t = 0; t < 3; ++t) EXPECT_NE(after.col(t), before.col(t));
}

TEST(Shared, TaskLossLeavesOtherHeadsWithoutGradient) {
  SharedMTLModel model(kThreeTasks, {}, 1);
  const Matrix preds = model.forward(inputs(8), Mode::kTrain);
  model.zero_grad();
  Matrix d = Matrix::Zero(preds.rows(), preds.cols());
  d.col(1).setOnes();
  model.backward(d);
  for (std::size_t other : {0u, 2u}) {
    for (auto& p : model.head_parameters(other)) EXPECT_TRUE(p.parameter->grad.isZero(0.0)) << p.name;
  }
  bool touched = false;
  for (auto& p : model.head_parameters(1)) touched = touched || !p.parameter->grad.isZero(0.0);
  EXPECT_TRUE(touched);
}

TEST(Shared, IndependentTrioHasMoreTaskSpecificParameters) {
  Index independent = 0;
  for (TaskKind kind : kThreeTasks) independent += make_model(ModelKind::kIndependent, {kind}, {}, 1)->parameter_count();
  SharedMTLModel shared(kThreeTasks, {}, 1);
  Index heads = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    for (auto& p : shared.head_parameters(t)) heads += p.parameter->size();
  }
  EXPECT_GT(independent, heads);
}

TEST(Structured, RelationsLieInUnitInterval) {
  StructuredMTLModel model(kThreeTasks, {}, 4);
  const Matrix w = model.relation_matrix();
  EXPECT_EQ(w.rows(), 3);
  EXPECT_TRUE((w.array() >= 0.0).all() && (w.array() <= 1.0).all());
}

TEST(Structured, IdenticalEmbeddingsGiveSymmetricRelations) {
  StructuredMTLModel model(kThreeTasks, {}, 4);
  const RowVector shared_row = model.embeddings().value.row(0);
  for (Index t = 0; t < 3; ++t) model.embeddings().value.row(t) = shared_row;
  const Matrix w = model.relation_matrix();
  EXPECT_TRUE(w.isApprox(w.transpose(), 1e-15));
}

TEST(Structured, DirectedRelationsInGeneral) {
  StructuredMTLModel model(kThreeTasks, {}, 4);
  const Matrix w = model.relation_matrix();
  EXPECT_NE(w(0, 1), w(1, 0));
}

TEST(Structured, ZeroAlphaMatchesSharedBitwise) {
  StructuredMTLModel model(kThreeTasks, {}, 6);
  model.set_alpha(0.0);
  const Matrix x = inputs(10);
  const Matrix fused = model.forward(x, Mode::kEval);
  const Matrix plain = model.shared().forward(x, Mode::kEval);
  EXPECT_EQ(fused, plain);
}

TEST(Structured, ForwardMatchesFusionFormula) {
  StructuredMTLModel model(kThreeTasks, {}, 6);
  const Matrix x = inputs(5);
  const Matrix fused = model.forward(x, Mode::kEval);
  const Matrix base = model.base_logits();
  const Matrix w = model.relation_matrix();
  for (Index i = 0; i < 3; ++i) {
    Vector expected = base.col(i);
    for (Index j = 0; j < 3; ++j) {
      if (j != i) expected += 0.1 * w(i, j) * model.fuse(std::size_t(i), base.col(j)).col(0);
    }
    if (i == 2) expected = expected.unaryExpr([](double v) { return sigmoid(v); });
    EXPECT_TRUE(fused.col(i).isApprox(expected, 1e-12)) << "task " << i;
  }
}

TEST(Structured, HandFusionArithmetic) {
  // f_i = 0.5, w_ij = 1, g_i = 0.3, alpha = 0.1.
  EXPECT_NEAR(0.5 + 0.1 * 1.0 * 0.3, 0.53, 1e-15);
}

TEST(Checkpoint, RoundTripIsExact) {
  for (ModelKind kind : {ModelKind::kIndependent, ModelKind::kShared, ModelKind::kStructured}) {
    const std::vector<TaskKind> kinds =
        kind == ModelKind::kIndependent ? std::vector<TaskKind>{TaskKind::kClassification} : kThreeTasks;
    auto model = make_model(kind, kinds, {}, 8);
    (void)model->forward(inputs(16), Mode::kTrain);  // moves batchnorm running stats
    std::stringstream buffer;
    save_checkpoint(*model, buffer);
    auto loaded = load_checkpoint(buffer);
    const Matrix x = inputs(7, 99);
    EXPECT_EQ(loaded->forward(x, Mode::kEval), model->forward(x, Mode::kEval)) << to_string(kind);
    EXPECT_EQ(take_snapshot(*loaded).buffers, take_snapshot(*model).buffers);
  }
}

TEST(Checkpoint, RejectsGarbage) {
  std::stringstream buffer("not a checkpoint\n");
  EXPECT_ANY_THROW(load_checkpoint(buffer));
}

TEST(Freeze, FrozenBackboneGetsNoGradient) {
  SharedMTLModel model(kThreeTasks, {}, 2);
  model.set_backbone_frozen(true);
  const Matrix preds = model.forward(inputs(8), Mode::kTrain);
  model.zero_grad();
  model.backward(Matrix::Ones(preds.rows(), preds.cols()));
  for (auto& p : model.backbone_parameters()) EXPECT_TRUE(p.parameter->grad.isZero(0.0)) << p.name;
  EXPECT_LT(model.trainable_parameters().size(), model.parameters().size());
}

}  // namespace
}  // namespace mtlbench
