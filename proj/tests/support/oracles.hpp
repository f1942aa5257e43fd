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

// Independent reference computations for the tests: dense factorizations,
// proximal gradient, closed forms. None of them call into the library's
// solvers.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rrc::testing {

/// (A^T diag(w) A + lambda I)^{-1} A^T diag(w) y by dense LDLT.
inline Eigen::VectorXd dense_weighted_ridge(const Eigen::MatrixXd& A,
                                            const Eigen::VectorXd& w,
                                            const Eigen::VectorXd& y,
                                            double lambda) {
  const Eigen::MatrixXd AtW = A.transpose() * w.asDiagonal();
  Eigen::MatrixXd G = AtW * A;
  G.diagonal().array() += lambda;
  return G.ldlt().solve(AtW * y);
}

inline double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

/// min ||W^{1/2}(y - A a)||^2 + lambda ||a||_1
inline double l1_objective(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                           const Eigen::VectorXd& y, double lambda,
                           const Eigen::VectorXd& a) {
  const Eigen::VectorXd r = y - A * a;
  return r.dot(w.asDiagonal() * r) + lambda * a.lpNorm<1>();
}

/// Proximal gradient (ISTA) with the exact Lipschitz step.
inline Eigen::VectorXd ista(const Eigen::MatrixXd& A, const Eigen::VectorXd& w,
                            const Eigen::VectorXd& y, double lambda,
                            int iterations) {
  const Eigen::MatrixXd M = w.cwiseSqrt().asDiagonal() * A;
  const Eigen::VectorXd b = w.cwiseSqrt().asDiagonal() * y;
  const Eigen::MatrixXd G = M.transpose() * M;
  const double L = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G)
                             .eigenvalues()
                             .maxCoeff();
  const Eigen::VectorXd Mtb = M.transpose() * b;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(A.cols());
  for (int k = 0; k < iterations; ++k) {
    const Eigen::VectorXd grad = 2.0 * (G * a - Mtb);
    const Eigen::VectorXd z = a - grad / L;
    for (Eigen::Index j = 0; j < a.size(); ++j) a[j] = soft_threshold(z[j], lambda / L);
  }
  return a;
}

/// Central difference of f at x.
template <typename F>
double central_difference(F f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Small seeded generator for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  double normal() { return std::normal_distribution<double>()(engine_); }
  Eigen::MatrixXd matrix(Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }
  Eigen::VectorXd vector(Eigen::Index n) { return matrix(n, 1).col(0); }
  Eigen::VectorXd weights(Eigen::Index n) {
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = uniform(0.0, 1.0);
    return w;
  }
  /// Random orthonormal n x n matrix.
  Eigen::MatrixXd orthonormal(Eigen::Index n) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(matrix(n, n));
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// Columns normalized to unit l2 norm.
inline Eigen::MatrixXd unit_columns(Eigen::MatrixXd m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) m.col(j).normalize();
  return m;
}

}  // namespace rrc::testing
