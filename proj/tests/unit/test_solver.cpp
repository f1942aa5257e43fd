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

#include "../support/oracles.hpp"
#include "rrc/solver.hpp"

namespace rrc {
namespace {

using testing::Gen;

LinearOperator dense(const Eigen::MatrixXd& A) {
  return [A](const Eigen::VectorXd& x) -> Eigen::VectorXd { return A * x; };
}

TEST(CgSolve, IdentityOneIteration) {
  const Eigen::VectorXd b = Eigen::Vector4d(1, -2, 3, 0.5);
  const CgResult r = cg_solve(dense(Eigen::MatrixXd::Identity(4, 4)), b, {});
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x - b).norm(), 1e-15);
}

TEST(CgSolve, Diagonal) {
  const Eigen::MatrixXd A = Eigen::Vector3d(1, 2, 4).asDiagonal();
  const CgResult r = cg_solve(dense(A), Eigen::Vector3d(1, 2, 4), {});
  EXPECT_LT((r.x - Eigen::Vector3d::Ones()).norm(), 1e-12);
}

TEST(CgSolve, ZeroRhs) {
  const CgResult r = cg_solve(dense(Eigen::MatrixXd::Identity(3, 3)),
                              Eigen::VectorXd::Zero(3), {});
  EXPECT_EQ(r.x, Eigen::VectorXd::Zero(3));
  EXPECT_TRUE(r.converged);
}

TEST(CgSolve, RandomSpdMatchesCholesky) {
  Gen g(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd B = g.matrix(20, 20);
    const Eigen::MatrixXd A = B.transpose() * B + 0.5 * Eigen::MatrixXd::Identity(20, 20);
    const Eigen::VectorXd b = g.vector(20);
    const Eigen::VectorXd ref = A.llt().solve(b);
    const CgResult r = cg_solve(dense(A), b, {1e-12, 200});
    EXPECT_TRUE(r.converged);
    EXPECT_LT((r.x - ref).norm() / ref.norm(), 1e-8);
    EXPECT_LE((A * r.x - b).norm(), 1e-11 * b.norm() * 10);
  }
}

TEST(CgSolve, Preconditioned) {
  Gen g(11);
  const Eigen::MatrixXd B = g.matrix(15, 15);
  Eigen::MatrixXd A = B.transpose() * B;
  for (int i = 0; i < 15; ++i) A(i, i) += std::pow(10.0, i % 5);
  const Eigen::VectorXd b = g.vector(15);
  const Eigen::VectorXd inv = A.diagonal().cwiseInverse();
  const CgResult r = cg_solve(dense(A), b, {1e-12, 200}, nullptr, &inv);
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.x - A.llt().solve(b)).norm(), 1e-9 * A.llt().solve(b).norm());
}

TEST(CgSolve, CapFlagsAndReturnsBest) {
  Gen g(12);
  const Eigen::MatrixXd B = g.matrix(30, 30);
  const Eigen::MatrixXd A = B.transpose() * B + 1e-3 * Eigen::MatrixXd::Identity(30, 30);
  const Eigen::VectorXd b = g.vector(30);
  const CgResult r = cg_solve(dense(A), b, {1e-14, 3});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_TRUE(r.x.allFinite());
  EXPECT_LE((A * r.x - b).norm(), b.norm() * 1.0000001);
}

TEST(CgSolve, NonFiniteThrows) {
  const LinearOperator bad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return x * std::numeric_limits<double>::quiet_NaN();
  };
  EXPECT_THROW(cg_solve(bad, Eigen::Vector2d(1, 1), {}), NumericError);
}

TEST(WeightedRidge, Examples) {
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  const CgOptions cg{1e-14, 10};
  Eigen::VectorXd a = solve_weighted_ridge(I, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0), 0.0, cg);
  EXPECT_NEAR(a[0], 1.0, 1e-14);
  EXPECT_NEAR(a[1], 0.0, 1e-14);
  a = solve_weighted_ridge(I, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0), 1.0, cg);
  EXPECT_NEAR(a[0], 0.5, 1e-14);
  EXPECT_NEAR(a[1], 0.0, 1e-14);
  a = solve_weighted_ridge(I, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1), 0.001, cg);
  EXPECT_NEAR(a[0], 1.0 / 1.001, 1e-14);
  EXPECT_NEAR(a[1], 0.0, 1e-14);
}

TEST(WeightedRidge, DenseOracleAndKkt) {
  Gen g(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = g.integer(1, 50), m = g.integer(1, 50);
    const Eigen::MatrixXd D = testing::unit_columns(g.matrix(n, m));
    const Eigen::VectorXd w = g.weights(n);
    const Eigen::VectorXd y = g.vector(n).normalized();
    const double lambda = std::pow(10.0, g.uniform(-3, 0));
    const CgOptions cg{1e-12, static_cast<int>(4 * m + 20)};
    const Eigen::VectorXd a = solve_weighted_ridge(D, w, y, lambda, cg);
    const Eigen::VectorXd ref = testing::dense_weighted_ridge(D, w, y, lambda);
    EXPECT_LE((a - ref).norm(), 1e-8 * std::max(ref.norm(), 1e-300));
    const Eigen::VectorXd rhs = D.transpose() * w.asDiagonal() * y;
    const Eigen::VectorXd kkt =
        D.transpose() * (w.asDiagonal() * (D * a)) + lambda * a - rhs;
    EXPECT_LE(kkt.norm(), 1e-10 * rhs.norm() + 1e-300);
  }
}

TEST(WeightedProblem, DropRemovesRows) {
  const Eigen::MatrixXd D = Eigen::MatrixXd::Identity(3, 2);
  const Eigen::Vector3d w(1.0, 1e-5, 0.25);
  const Eigen::Vector3d y(1, 2, 3);
  const WeightedProblem none = WeightedProblem::pixel(D, w, y);
  EXPECT_EQ(none.design.rows(), 3);
  EXPECT_EQ(none.dropped_rows, 0);
  const WeightedProblem zero = WeightedProblem::pixel(D, w, y, 0.0);
  EXPECT_EQ(zero.design, none.design);
  EXPECT_EQ(zero.target, none.target);
  const WeightedProblem dropped = WeightedProblem::pixel(D, w, y, 1e-3);
  EXPECT_EQ(dropped.dropped_rows, 1);
  EXPECT_EQ(dropped.design.rows(), 2);
  EXPECT_DOUBLE_EQ(dropped.target[1], 0.5 * 3);
}

TEST(WeightedProblem, ProjectedWithIdentityMatchesPixel) {
  Gen g(14);
  const Eigen::MatrixXd D = g.matrix(6, 4);
  const Eigen::VectorXd w = g.weights(6), y = g.vector(6);
  const WeightedProblem p = WeightedProblem::pixel(D, w, y);
  const WeightedProblem q =
      WeightedProblem::projected(D, w, y, Eigen::MatrixXd::Identity(6, 6));
  EXPECT_EQ(p.design, q.design);
  EXPECT_EQ(p.target, q.target);
}

TEST(CoefWeights, Examples) {
  EXPECT_NEAR(update_coef_weights(Eigen::VectorXd::Zero(1), 0.001, 0.1)[0], 0.01, 1e-15);
  EXPECT_NEAR(update_coef_weights(Eigen::VectorXd::Ones(1), 1.0, 1e-9)[0], 1.0, 1e-12);
  EXPECT_NEAR(update_coef_weights(Eigen::VectorXd::Constant(1, 3.0), 1.0, 4.0)[0], 0.2, 1e-15);
  Gen g(15);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd a = g.vector(10) * 10.0;
    const Eigen::VectorXd v = update_coef_weights(a, g.uniform(1e-4, 1), g.uniform(1e-10, 1));
    EXPECT_TRUE(v.allFinite());
    EXPECT_GT(v.minCoeff(), 0.0);
  }
}

TEST(Epsilon, Examples) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(100);
  a[7] = -0.5;
  a[3] = 0.2;
  EXPECT_EQ(coefficient_rank(100), 1);
  EXPECT_EQ(coefficient_rank(50), 1);
  EXPECT_EQ(coefficient_rank(250), 2);
  EXPECT_NEAR(update_epsilon(a, 1.0, 1), 0.005, 1e-15);
  EXPECT_EQ(update_epsilon(a, 1e-6, 1), 1e-6);
  EXPECT_NEAR(update_epsilon(a, 1.0, 2), 0.002, 1e-15);
  EXPECT_EQ(update_epsilon(Eigen::VectorXd::Zero(5), 1.0, 1), kEpsilonMin);
  EXPECT_NEAR(update_epsilon(a, 1.0, 1, 0.001), 0.001, 1e-15);
}

TEST(Epsilon, NonIncreasing) {
  Gen g(16);
  double eps = 1.0;
  for (int k = 0; k < 200; ++k) {
    const double next = update_epsilon(g.vector(30), eps, 1, g.uniform(0.1, 1.0));
    EXPECT_LE(next, eps);
    EXPECT_GE(next, kEpsilonMin);
    eps = next;
  }
}

L1Options tight() {
  L1Options o;
  o.inner_max_iter = 500;
  o.inner_tol = 1e-8;
  o.cg = {1e-12, 200};
  return o;
}

TEST(SolveL1, SoftThresholdExample) {
  const SolveReport r = solve_l1(
      WeightedProblem::pixel(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(1, 1),
                             Eigen::Vector2d(1, 0.1)),
      0.4, tight());
  EXPECT_NEAR(r.alpha[0], 0.8, 1e-4);
  EXPECT_NEAR(r.alpha[1], 0.0, 1e-4);
  EXPECT_TRUE(r.converged);
}

TEST(SolveL1, ZeroSignal) {
  const SolveReport r = solve_l1(
      WeightedProblem::pixel(Eigen::MatrixXd::Identity(3, 3), Eigen::Vector3d(1, 1, 1),
                             Eigen::Vector3d::Zero()),
      0.1, L1Options{});
  EXPECT_EQ(r.alpha, Eigen::VectorXd::Zero(3));
}

TEST(SolveL1, OrthonormalSoftThreshold) {
  Gen g(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = g.integer(2, 12);
    const Eigen::MatrixXd Q = g.orthonormal(n);
    const Eigen::VectorXd y = g.vector(n).normalized();
    const double lambda = g.uniform(0.01, 0.3);
    const SolveReport r = solve_l1(
        WeightedProblem::pixel(Q, Eigen::VectorXd::Ones(n), y), lambda, tight());
    const Eigen::VectorXd z = Q.transpose() * y;
    for (Index j = 0; j < n; ++j) {
      EXPECT_NEAR(r.alpha[j], testing::soft_threshold(z[j], lambda / 2), 1e-4);
    }
  }
}

TEST(SolveL1, MatchesProximalGradient) {
  Gen g(18);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXd D = testing::unit_columns(g.matrix(8, 12));
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(8);
    const Eigen::VectorXd y = g.vector(8).normalized();
    const double lambda = 0.01;
    const SolveReport r = solve_l1(WeightedProblem::pixel(D, w, y), lambda, tight());
    const Eigen::VectorXd ref = testing::ista(D, w, y, lambda, 100000);
    const double f = testing::l1_objective(D, w, y, lambda, r.alpha);
    const double f_ref = testing::l1_objective(D, w, y, lambda, ref);
    EXPECT_LE((f - f_ref) / f_ref, 1e-3);
  }
}

TEST(SolveL1, SmoothedObjectiveNonIncreasing) {
  Gen g(19);
  const Eigen::MatrixXd D = testing::unit_columns(g.matrix(10, 15));
  const Eigen::VectorXd w = g.weights(10);
  const Eigen::VectorXd y = g.vector(10).normalized();
  const double lambda = 0.02;
  const WeightedProblem p = WeightedProblem::pixel(D, w, y);
  auto smoothed = [&](const Eigen::VectorXd& a, double eps) {
    const Eigen::VectorXd r = y - D * a;
    return r.dot(w.asDiagonal() * r) +
           lambda * (a.array().square() + eps * eps).sqrt().sum();
  };
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 30; ++k) {
    L1Options o = tight();
    o.inner_max_iter = k;
    o.inner_tol = 1e-300;
    const SolveReport r = solve_l1(p, lambda, o);
    const double j = smoothed(r.alpha, r.epsilon);
    EXPECT_LE(j, prev * (1 + 1e-9) + 1e-15) << "k=" << k;
    prev = j;
  }
}

TEST(SolveL1, CapFlagsNonConvergence) {
  Gen g(20);
  const Eigen::MatrixXd D = testing::unit_columns(g.matrix(8, 12));
  L1Options o;
  o.inner_max_iter = 1;
  const SolveReport r = solve_l1(
      WeightedProblem::pixel(D, Eigen::VectorXd::Ones(8), g.vector(8).normalized()), 0.01, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.inner_iterations, 1);
}

TEST(SolveL1, SmallLambdaApproachesInterpolation) {
  Gen g(21);
  const Eigen::MatrixXd D = testing::unit_columns(g.matrix(6, 6));
  const Eigen::VectorXd y = g.vector(6).normalized();
  const Eigen::VectorXd exact = D.lu().solve(y);
  L1Options o = tight();
  o.cg = {1e-14, 500};
  const SolveReport r =
      solve_l1(WeightedProblem::pixel(D, Eigen::VectorXd::Ones(6), y), 1e-7, o);
  const Eigen::VectorXd ridge = solve_weighted_ridge(D, Eigen::VectorXd::Ones(6), y, 1e-12,
                                                     {1e-14, 500});
  EXPECT_LT((r.alpha - exact).norm() / exact.norm(), 1e-3);
  EXPECT_LT((ridge - exact).norm() / exact.norm(), 1e-3);
}

}  // namespace
}  // namespace rrc
