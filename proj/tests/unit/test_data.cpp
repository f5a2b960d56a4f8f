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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "mtlbench/core/errors.hpp"
#include "mtlbench/data/batch.hpp"
#include "mtlbench/data/csv.hpp"
#include "mtlbench/data/normalize.hpp"
#include "mtlbench/data/split.hpp"
#include "mtlbench/data/synthetic.hpp"

namespace mtlbench {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mtlbench_test_data_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Dataset single_task(Index n, TaskKind kind, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DatasetBuilder builder({"x0", "x1"}, {"y"}, {kind});
  for (Index i = 0; i < n; ++i) {
    const double f[2] = {normal(rng), normal(rng)};
    const double y = kind == TaskKind::kRegression ? normal(rng) : double(i % 3 == 0);
    const std::optional<double> t[1] = {y};
    builder.add(f, t);
  }
  return builder.build();
}

TEST(Dataset, MaskFollowsAvailability) {
  const std::vector<Sample> samples{{{1.0, 2.0}, {1.5, 3.0, 1.0}}, {{0.0, 1.0}, {2.5, std::nullopt, std::nullopt}}};
  const Dataset ds = Dataset::from_samples({"a", "b"}, {"resistivity", "hardness", "amorphous"},
                                           {TaskKind::kRegression, TaskKind::kRegression, TaskKind::kClassification},
                                           samples);
  EXPECT_EQ(ds.mask().row(0), RowVector::Ones(3));
  EXPECT_EQ(ds.mask().row(1), (RowVector(3) << 1, 0, 0).finished());
  EXPECT_EQ(ds.label_count(1), 1);
  EXPECT_EQ(ds.task_subset(2).size(), 1);
  EXPECT_FALSE(ds.sample(1).targets[1].has_value());
}

TEST(Dataset, RejectsNonBinaryClassificationLabel) {
  DatasetBuilder builder({"a"}, {"c"}, {TaskKind::kClassification});
  const double f[1] = {0.0};
  const std::optional<double> t[1] = {0.5};
  EXPECT_THROW(builder.add(f, t), DataError);
}

TEST(Csv, RoundTripKeepsMissingLabels) {
  const fs::path dir = scratch_dir("roundtrip");
  SyntheticSpec spec;
  spec.counts = {30, 10, 12};
  const Dataset ds = generate_synthetic(spec);
  write_csv(ds, dir / "d.csv");
  CsvSchema schema;
  schema.features = ds.feature_names();
  for (std::size_t t = 0; t < ds.num_tasks(); ++t) schema.targets.push_back({ds.task_names()[t], ds.task_kinds()[t]});
  const Dataset back = load_csv(dir / "d.csv", schema);
  EXPECT_EQ(back, ds);
}

TEST(Csv, MalformedRowsAreAllReportedAndNothingLoads) {
  const fs::path dir = scratch_dir("malformed");
  CsvSchema schema;
  schema.features = {"a", "b"};
  schema.targets = {{"y", TaskKind::kRegression}};
  std::ofstream out(dir / "bad.csv");
  out << "a,b,y\n";
  for (int row = 1; row <= 10; ++row) {
    if (row == 2) {
      out << "1.0,oops,2.0\n";
    } else if (row == 7) {
      out << "1.0,2.0\n";
    } else {
      out << row << ",0.5," << row * 2 << "\n";
    }
  }
  out.close();
  try {
    (void)load_csv(dir / "bad.csv", schema);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("row 2"), std::string::npos) << what;
    EXPECT_NE(what.find("row 7"), std::string::npos) << what;
  }
}

TEST(Csv, FormatDoubleIsShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, SchemaSidecarRoundTrip) {
  const fs::path dir = scratch_dir("schema");
  const CsvSchema alloy = CsvSchema::alloy();
  alloy.save(dir / "s.schema");
  const CsvSchema back = CsvSchema::load(dir / "s.schema");
  EXPECT_EQ(back.features, alloy.features);
  EXPECT_EQ(back.nonnegative, alloy.nonnegative);
  ASSERT_EQ(back.targets.size(), 3u);
  EXPECT_EQ(back.targets[2].kind, TaskKind::kClassification);
}

TEST(Normalize, HandColumn) {
  DatasetBuilder builder({"x"}, {"y"}, {TaskKind::kRegression});
  for (double v : {1.0, 3.0}) {
    const double f[1] = {v};
    const std::optional<double> t[1] = {0.0};
    builder.add(f, t);
  }
  const Dataset ds = builder.build();
  const NormalizationStats stats = fit_normalize(ds);
  EXPECT_DOUBLE_EQ(stats.mean(0), 2.0);
  EXPECT_DOUBLE_EQ(stats.std(0), 1.0);
  const Dataset z = apply_normalize(ds, stats);
  EXPECT_DOUBLE_EQ(z.features()(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(z.features()(1, 0), 1.0);
}

TEST(Normalize, ConstantColumnIsFlaggedAndZeroed) {
  DatasetBuilder builder({"x"}, {"y"}, {TaskKind::kRegression});
  for (int k = 0; k < 3; ++k) {
    const double f[1] = {4.0};
    const std::optional<double> t[1] = {1.0};
    builder.add(f, t);
  }
  const Dataset ds = builder.build();
  const NormalizationStats stats = fit_normalize(ds);
  EXPECT_TRUE(stats.degenerate[0]);
  EXPECT_EQ(stats.std(0), 1.0);
  EXPECT_TRUE(apply_normalize(ds, stats).features().isZero(0.0));
}

TEST(Normalize, StandardizedDataIsNearlyFixed) {
  const Dataset ds = single_task(2000, TaskKind::kRegression, 3);
  const Dataset once = apply_normalize(ds, fit_normalize(ds));
  const NormalizationStats again = fit_normalize(once);
  EXPECT_NEAR(again.mean(0), 0.0, 1e-12);
  EXPECT_NEAR(again.std(0), 1.0, 1e-12);
}

TEST(Normalize, StatisticsComeFromTrainOnly) {
  const Dataset ds = single_task(1000, TaskKind::kRegression, 4);
  const DatasetSplits splits = stratified_split(ds, {}, 42);
  const NormalizationStats train = fit_normalize(splits.train);
  const NormalizationStats test = fit_normalize(splits.test);
  EXPECT_NE(train.mean(0), test.mean(0));
}

TEST(Split, ReferenceSizeCounts) {
  // Tolerance: +-1 per split.
  const auto big = split_counts(52388, {});
  EXPECT_NEAR(double(big[0]), 36670.0, 1.0);
  EXPECT_NEAR(double(big[1]), 7859.0, 1.0);
  EXPECT_NEAR(double(big[2]), 7859.0, 1.0);
  const auto small = split_counts(800, {});
  EXPECT_EQ(small[0], 560);
  EXPECT_EQ(small[1], 120);
  EXPECT_EQ(small[2], 120);
}

TEST(Split, DisjointCoverAndDeterministic) {
  SyntheticSpec spec;
  spec.counts = {400, 80, 84};
  const Dataset ds = generate_synthetic(spec);
  const DatasetSplits a = stratified_split(ds, {}, 42);
  const DatasetSplits b = stratified_split(ds, {}, 42);
  EXPECT_EQ(a.train_rows, b.train_rows);
  EXPECT_EQ(a.test_rows, b.test_rows);
  std::vector<Index> all = a.train_rows;
  all.insert(all.end(), a.validation_rows.begin(), a.validation_rows.end());
  all.insert(all.end(), a.test_rows.begin(), a.test_rows.end());
  std::sort(all.begin(), all.end());
  std::vector<Index> expected(std::size_t(ds.size()));
  std::iota(expected.begin(), expected.end(), Index(0));
  EXPECT_EQ(all, expected);
  const DatasetSplits c = stratified_split(ds, {}, 43);
  EXPECT_NE(a.train_rows, c.train_rows);
}

TEST(Split, ClassesAreStratified) {
  const Dataset ds = single_task(3000, TaskKind::kClassification, 8);
  const DatasetSplits s = stratified_split(ds, {}, 1);
  const double overall = ds.targets().col(0).mean();
  EXPECT_NEAR(s.train.targets().col(0).mean(), overall, 0.01);
  EXPECT_NEAR(s.test.targets().col(0).mean(), overall, 0.01);
}

TEST(Split, LargeSingleTask) {
  const Dataset ds = single_task(52388, TaskKind::kRegression, 12);
  const DatasetSplits s = stratified_split(ds, {}, 42);
  EXPECT_NEAR(double(s.train.size()), 36670.0, 1.0);
  EXPECT_NEAR(double(s.validation.size()), 7859.0, 1.0);
  EXPECT_NEAR(double(s.test.size()), 7859.0, 1.0);
}

TEST(Downsample, KeepsOtherTasksExactly) {
  SyntheticSpec spec;
  spec.counts = {1000, 800, 50};
  const Dataset ds = generate_synthetic(spec);
  const Dataset down = downsample_task(ds, 0, 1000, 5);
  EXPECT_EQ(down.label_count(0), 1000);
  EXPECT_EQ(down, ds);
  const Dataset smaller = downsample_task(ds, 0, 100, 5);
  EXPECT_EQ(smaller.label_count(0), 100);
  EXPECT_EQ(smaller.task_subset(1), ds.task_subset(1));
  EXPECT_EQ(smaller.task_subset(2), ds.task_subset(2));
  EXPECT_DOUBLE_EQ(double(down.label_count(0)) / double(down.label_count(1)), 1.25);
}

TEST(Downsample, RejectsZeroAndTooMany) {
  SyntheticSpec spec;
  spec.counts = {100, 20, 20};
  const Dataset ds = generate_synthetic(spec);
  EXPECT_THROW(downsample_task(ds, 0, 0, 1), ArgumentError);
  EXPECT_THROW(downsample_task(ds, 0, 101, 1), ArgumentError);
}

double correlation(const Vector& a, const Vector& b) {
  const Vector ca = a.array() - a.mean();
  const Vector cb = b.array() - b.mean();
  return ca.dot(cb) / std::sqrt(ca.squaredNorm() * cb.squaredNorm());
}

Matrix probe_features(Index n, Index dim) {
  Rng rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, dim);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
  return x;
}

TEST(Synthetic, IndependentTeachersAreUncorrelated) {
  // Monte Carlo oracle: |corr| < 0.1 over 5,000 shared probe inputs.
  SyntheticSpec spec;
  spec.relatedness = 0.0;
  const Matrix scores = SyntheticTeachers(spec).latent_scores(probe_features(5000, spec.feature_dim));
  for (Index a = 0; a < scores.cols(); ++a) {
    for (Index b = a + 1; b < scores.cols(); ++b) {
      EXPECT_LT(std::abs(correlation(scores.col(a), scores.col(b))), 0.1);
    }
  }
}

TEST(Synthetic, FullRelatednessGivesIdenticalScores) {
  SyntheticSpec spec;
  spec.relatedness = 1.0;
  const Matrix scores = SyntheticTeachers(spec).latent_scores(probe_features(200, spec.feature_dim));
  EXPECT_EQ(scores.col(0), scores.col(1));
  EXPECT_EQ(scores.col(1), scores.col(2));
}

TEST(Synthetic, CorrelationIsMonotoneInRelatedness) {
  const Matrix x = probe_features(5000, 21);
  double previous = -1.0;
  for (double rho : {0.0, 0.5, 1.0}) {
    SyntheticSpec spec;
    spec.relatedness = rho;
    const Matrix s = SyntheticTeachers(spec).latent_scores(x);
    const double c = correlation(s.col(0), s.col(1));
    EXPECT_GE(c, previous) << "rho " << rho;
    previous = c;
  }
}

TEST(Synthetic, DefaultShapeAndDisjointBlocks) {
  const Dataset ds = generate_synthetic(SyntheticSpec{});
  EXPECT_EQ(ds.size(), 5403);
  EXPECT_EQ(ds.feature_dim(), 21);
  EXPECT_EQ(ds.label_count(0), 5239);
  EXPECT_EQ(ds.label_count(1), 80);
  EXPECT_EQ(ds.label_count(2), 84);
  EXPECT_TRUE((ds.mask().rowwise().sum().array() == 1.0).all());
  EXPECT_EQ(generate_synthetic(SyntheticSpec{}), ds);
}

TEST(Synthetic, ValidationRejectsBadSpecs) {
  SyntheticSpec spec;
  spec.relatedness = 1.5;
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
  spec = SyntheticSpec{};
  spec.counts = {1, 2};
  EXPECT_THROW(generate_synthetic(spec), ConfigError);
}

TEST(Batch, PartitionArithmetic) {
  const Dataset ds = single_task(100, TaskKind::kRegression, 1);
  const BatchIterator it(ds, 32, 7, false);
  const auto order = it.epoch_order(0);
  ASSERT_EQ(order.size(), 4u);
  EXPECT_EQ(order[0].size(), 32u);
  EXPECT_EQ(order[3].size(), 4u);
  for (std::size_t k = 0; k < 32; ++k) EXPECT_EQ(order[0][k], Index(k));
}

TEST(Batch, ShuffleIsSeededPerEpoch) {
  const Dataset ds = single_task(100, TaskKind::kRegression, 1);
  const BatchIterator a(ds, 32, 7, true);
  const BatchIterator b(ds, 32, 7, true);
  EXPECT_EQ(a.epoch_order(3), b.epoch_order(3));
  EXPECT_NE(a.epoch_order(3), a.epoch_order(4));
}

TEST(Batch, GatherKeepsMask) {
  SyntheticSpec spec;
  spec.counts = {10, 5, 5};
  const Dataset ds = generate_synthetic(spec);
  const std::vector<Index> rows{0, 12, 19};
  const Batch b = gather_batch(ds, rows);
  EXPECT_EQ(b.mask.row(1), ds.mask().row(12));
  EXPECT_EQ(b.features.row(2), ds.features().row(19));
}

TEST(Batch, MinorityShareAtSkewedProportions) {
  // 32 x 800 / 54,028 hardness rows per batch on average.
  EXPECT_NEAR(32.0 * 800.0 / 54028.0, 0.47, 0.005);
}

}  // namespace
}  // namespace mtlbench
