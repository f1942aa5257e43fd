// Copyright (c) 2026, The RRC Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rrc/classify.hpp"
#include "rrc/harness/baselines.hpp"
#include "rrc/harness/dataset.hpp"
#include "rrc/harness/experiment.hpp"
#include "rrc/harness/synth.hpp"

namespace rrc::harness {
namespace {

namespace fs = std::filesystem;
using rrc::testing::Gen;

TEST(Nn, PicksClosestAtomLowestIndexOnTies) {
  Eigen::MatrixXd atoms(2, 3);
  atoms << 1, 0, 1,
           0, 1, 0;
  const ClassPartition p({0, 1, 1});
  Eigen::VectorXd y(2);
  y << 0.2, 0.9;
  EXPECT_EQ(baseline_nn(atoms, y, p).predicted_class, 1);
  // atoms 0 and 2 coincide: the lower index (class 0) wins
  y << 1, 0;
  EXPECT_EQ(baseline_nn(atoms, y, p).predicted_class, 0);
}

TEST(Nn, QueryEqualToAtom) {
  Gen g(21);
  const Eigen::MatrixXd atoms = rrc::testing::unit_columns(g.matrix(30, 12));
  const ClassPartition p({0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3});
  for (Index j = 0; j < atoms.cols(); ++j) {
    EXPECT_EQ(baseline_nn(atoms, atoms.col(j), p).predicted_class, p.label(j));
  }
}

TEST(Nn, InvariantUnderRotation) {
  Gen g(22);
  const Eigen::MatrixXd atoms = rrc::testing::unit_columns(g.matrix(10, 8));
  const ClassPartition p({0, 0, 1, 1, 2, 2, 3, 3});
  const Eigen::MatrixXd q = g.orthonormal(10);
  for (int t = 0; t < 20; ++t) {
    const Eigen::VectorXd y = g.vector(10);
    EXPECT_EQ(baseline_nn(atoms, y, p).predicted_class,
              baseline_nn(q * atoms, q * y, p).predicted_class);
  }
}

TEST(Ridge, PlantedClassAndOracle) {
  Gen g(23);
  const Eigen::MatrixXd atoms = rrc::testing::unit_columns(g.matrix(60, 12));
  const ClassPartition p({0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 3});
  const Eigen::VectorXd y = 0.6 * atoms.col(7) + 0.4 * atoms.col(8);
  CgOptions cg;
  cg.tol = 1e-12;
  cg.max_iter = 200;
  const BaselineResult r = baseline_ridge(atoms, y, 1e-3, p, cg);
  EXPECT_EQ(r.predicted_class, 2);
  const Eigen::VectorXd oracle =
      rrc::testing::dense_weighted_ridge(atoms, Eigen::VectorXd::Ones(60), y, 1e-3);
  EXPECT_LT((r.alpha - oracle).norm(), 1e-8);
  ASSERT_EQ(r.residuals.size(), 4u);
  for (int c = 0; c < 4; ++c) {
    Eigen::VectorXd rec = Eigen::VectorXd::Zero(60);
    for (Index j : p.members(c)) rec += atoms.col(j) * r.alpha(j);
    EXPECT_NEAR(r.residuals[static_cast<size_t>(c)], (y - rec).norm(), 1e-8);
  }
  EXPECT_GT(r.sci, 0.9);
}

TEST(Roc, SweepAndAuc) {
  const std::vector<double> cust{0.9, 0.8, 0.4};
  const std::vector<double> imp{0.1, 0.4, 0.05};
  const auto pts = roc_sweep(cust, imp, {0.0, 0.4, 0.5, 1.0});
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_DOUBLE_EQ(pts[0].tpr, 1.0);
  EXPECT_DOUBLE_EQ(pts[0].fpr, 1.0);
  EXPECT_DOUBLE_EQ(pts[1].tpr, 1.0);
  EXPECT_DOUBLE_EQ(pts[1].fpr, 1.0 / 3);
  EXPECT_DOUBLE_EQ(pts[2].tpr, 2.0 / 3);
  EXPECT_DOUBLE_EQ(pts[2].fpr, 0.0);
  EXPECT_DOUBLE_EQ(pts[3].tpr, 0.0);
  // 9 pairs: 8 wins and one tie (0.4 vs 0.4)
  EXPECT_DOUBLE_EQ(roc_auc(cust, imp), 8.5 / 9);
  EXPECT_DOUBLE_EQ(roc_auc({1.0}, {0.0}), 1.0);
  EXPECT_DOUBLE_EQ(roc_auc({0.3, 0.3}, {0.3}), 0.5);
}

TEST(Roc, DefaultThresholds) {
  const auto t = default_thresholds();
  ASSERT_EQ(t.size(), 101u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 1.0);
  EXPECT_NEAR(t[37], 0.37, 1e-15);
}

TEST(Roc, SweepMonotoneProperty) {
  Gen g(24);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> c(20), i(15);
    for (auto& v : c) v = g.uniform(0, 1);
    for (auto& v : i) v = g.uniform(0, 1);
    const auto pts = roc_sweep(c, i, default_thresholds());
    for (size_t k = 1; k < pts.size(); ++k) {
      EXPECT_LE(pts[k].tpr, pts[k - 1].tpr);
      EXPECT_LE(pts[k].fpr, pts[k - 1].fpr);
    }
  }
}

SynthSpec small_spec() {
  SynthSpec s;
  s.classes = 4;
  s.train_per_class = 6;
  s.test_per_class = 3;
  s.width = 12;
  s.height = 10;
  s.seed = 3;
  return s;
}

TEST(Synth, DeterministicAndShaped) {
  SynthSpec s = small_spec();
  s.impostor_classes = 2;
  const DatasetSplit a = generate_synthetic(s);
  const DatasetSplit b = generate_synthetic(s);
  ASSERT_EQ(a.train.images.size(), 24u);
  ASSERT_EQ(a.test.images.size(), 12u);
  ASSERT_EQ(a.impostors.images.size(), 6u);
  EXPECT_EQ(a.width, 12);
  EXPECT_EQ(a.height, 10);
  for (size_t i = 0; i < a.train.images.size(); ++i) {
    EXPECT_EQ(a.train.images[i], b.train.images[i]);
  }
  s.seed = 4;
  EXPECT_NE(generate_synthetic(s).train.images[0], a.train.images[0]);
}

TEST(Synth, WrittenCopyLoadsIdentically) {
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("rrc_synth_" + std::to_string(rd()));
  SynthSpec s = small_spec();
  s.impostor_classes = 1;
  const fs::path manifest = write_synthetic(s, dir);
  ExperimentConfig e;
  e.dataset = manifest;
  const DatasetSplit disk = load_experiment_data(e);
  const DatasetSplit mem = generate_synthetic(s);
  ASSERT_EQ(disk.train.images.size(), mem.train.images.size());
  ASSERT_EQ(disk.test.images.size(), mem.test.images.size());
  ASSERT_EQ(disk.impostors.images.size(), mem.impostors.images.size());
  for (size_t i = 0; i < mem.train.images.size(); ++i) {
    EXPECT_EQ(disk.train.images[i], mem.train.images[i]);
    EXPECT_EQ(disk.train.labels[i], mem.train.labels[i]);
  }
  for (size_t i = 0; i < mem.test.images.size(); ++i) {
    EXPECT_EQ(disk.test.images[i], mem.test.images[i]);
  }
  EXPECT_TRUE(fs::exists(dir / "occluder.pgm"));
  fs::remove_all(dir);
}

ExperimentConfig quick_config() {
  ExperimentConfig e;
  e.experiment_id = "t";
  e.seed = 5;
  return e;
}

TEST(Benchmark, TestSetEqualToTrainingSet) {
  DatasetSplit d = generate_synthetic(small_spec());
  d.test = d.train;
  const ExperimentOutput out =
      run_benchmark(d, quick_config(), Perturbation::kCorruption, {0.0});
  ASSERT_EQ(out.rows.size(), 4u);
  for (const auto& r : out.rows) {
    EXPECT_DOUBLE_EQ(r.rate, 1.0) << r.method;
    EXPECT_EQ(r.counted, d.test.images.size());
    EXPECT_EQ(r.failures, 0u);
  }
  EXPECT_TRUE(out.warnings.empty());
}

TEST(Benchmark, QueryLayoutAndDeterminism) {
  const DatasetSplit d = generate_synthetic(small_spec());
  ExperimentConfig e = quick_config();
  e.nn = false;
  e.ridge = false;
  const ExperimentOutput a = run_benchmark(d, e, Perturbation::kOcclusion, {0.0, 0.2});
  e.threads = 3;
  const ExperimentOutput b = run_benchmark(d, e, Perturbation::kOcclusion, {0.0, 0.2});
  ASSERT_EQ(a.queries.size(), 2u * 12u * 2u);
  for (size_t i = 0; i < a.queries.size(); ++i) {
    const auto& q = a.queries[i];
    EXPECT_EQ(q.query, (i / 2) % 12);
    EXPECT_EQ(q.method, i % 2 == 0 ? "RRC_L1" : "RRC_L2");
    EXPECT_EQ(q.predicted_class, b.queries[i].predicted_class);
    EXPECT_EQ(q.sci, b.queries[i].sci);
    EXPECT_EQ(q.objective, b.queries[i].objective);
  }
}

TEST(Benchmark, FailedQueriesAreRecorded) {
  DatasetSplit d = generate_synthetic(small_spec());
  d.test.images[1] = GrayImage(d.width, d.height, 0);
  d.test.names[1] = "blank";
  ExperimentConfig e = quick_config();
  const ExperimentOutput out = run_benchmark(d, e, Perturbation::kOcclusion, {0.0});
  for (const auto& r : out.rows) {
    EXPECT_EQ(r.failures, 1u) << r.method;
    EXPECT_EQ(r.counted, d.test.images.size() - 1);
  }
  EXPECT_FALSE(out.warnings.empty());
  size_t failed = 0;
  for (const auto& q : out.queries) failed += q.failed;
  EXPECT_EQ(failed, 4u);
}

TEST(Validation, RocCurvesPerCodingMethod) {
  SynthSpec s = small_spec();
  s.impostor_classes = 2;
  const DatasetSplit d = generate_synthetic(s);
  const ExperimentOutput out = run_validation(d, quick_config());
  ASSERT_EQ(out.roc.size(), 3u);
  for (const auto& c : out.roc) {
    EXPECT_NE(c.method, "NN");
    ASSERT_EQ(c.points.size(), 101u);
    EXPECT_DOUBLE_EQ(c.points.front().tpr, 1.0);
    EXPECT_DOUBLE_EQ(c.points.front().fpr, 1.0);
    for (size_t k = 1; k < c.points.size(); ++k) {
      EXPECT_LE(c.points[k].tpr, c.points[k - 1].tpr);
      EXPECT_LE(c.points[k].fpr, c.points[k - 1].fpr);
    }
    EXPECT_GE(c.auc, 0.0);
    EXPECT_LE(c.auc, 1.0);
  }
  for (const auto& r : out.rows) EXPECT_EQ(r.counted, d.test.images.size());
}

TEST(Csv, MetricsFormat) {
  std::random_device rd;
  const fs::path p = fs::temp_directory_path() / ("rrc_m_" + std::to_string(rd()) + ".csv");
  MetricsRow r;
  r.experiment = "e";
  r.method = "RIDGE";
  r.perturbation = "corruption";
  r.level = 0.2;
  r.rate = 0.75;
  r.mean_iters = 1;
  r.mean_ms = 3.5;
  write_metrics_csv({r}, false, p);
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "experiment,method,perturbation,level,rate,mean_iters,mean_ms");
  EXPECT_NE(text.find("e,RIDGE,corruption,0.2"), std::string::npos) << text;
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find("3.5"), std::string::npos);
  fs::remove(p);
}

TEST(Config, Validation) {
  ExperimentConfig e;
  EXPECT_THROW(e.validate(true), std::invalid_argument);
  e.seed = 1;
  EXPECT_NO_THROW(e.validate(true));
  e.occlusion_levels = {1.0};
  EXPECT_THROW(e.validate(true), std::invalid_argument);
  e.occlusion_levels = {0.1};
  e.rrc_l1 = e.rrc_l2 = e.ridge = e.nn = false;
  EXPECT_THROW(e.validate(false), std::invalid_argument);
}

}  // namespace
}  // namespace rrc::harness
