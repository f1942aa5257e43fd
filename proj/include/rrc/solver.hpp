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

#pragma once

#include <functional>
#include <optional>

#include "rrc/types.hpp"

namespace rrc {

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct CgOptions {
  double tol = 1e-8;
  int max_iter = 100;
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;  ///< ||b - A x|| / ||b|| (recursive)
  bool converged = false;
};

/// (Preconditioned) conjugate gradient for a symmetric positive definite
/// operator. Stops once ||r|| <= tol * ||b||; on hitting max_iter the best
/// iterate seen is returned with converged = false. `inv_diag`, when given,
/// is the inverse of a diagonal (Jacobi) preconditioner.
/// Throws NumericError if an intermediate quantity becomes non-finite.
CgResult cg_solve(const LinearOperator& apply_A, const Eigen::VectorXd& b,
                  const CgOptions& options,
                  const Eigen::VectorXd* x0 = nullptr,
                  const Eigen::VectorXd* inv_diag = nullptr);

/// Least-squares data term ||target - design * alpha||^2 of one coding step.
///
/// In the pixel domain design = W^{1/2} D and target = W^{1/2} y; rows whose
/// weight falls below a drop threshold are removed. In the projected domain
/// both are additionally multiplied by a projection P from the left.
struct WeightedProblem {
  Eigen::MatrixXd design;
  Eigen::VectorXd target;
  Index dropped_rows = 0;

  static WeightedProblem pixel(const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                               const Eigen::Ref<const Eigen::VectorXd>& weights,
                               const Eigen::Ref<const Eigen::VectorXd>& y,
                               std::optional<double> drop_threshold = {});

  static WeightedProblem projected(
      const Eigen::Ref<const Eigen::MatrixXd>& atoms,
      const Eigen::Ref<const Eigen::VectorXd>& weights,
      const Eigen::Ref<const Eigen::VectorXd>& y,
      const Eigen::Ref<const Eigen::MatrixXd>& projection,
      std::optional<double> drop_threshold = {});

  Index atoms() const { return design.cols(); }
  /// design^T (design * x)
  Eigen::VectorXd normal_apply(const Eigen::VectorXd& x) const;
  /// design^T target
  Eigen::VectorXd normal_rhs() const;
  /// diag(design^T design)
  Eigen::VectorXd normal_diagonal() const;
};

struct SolveReport {
  Eigen::VectorXd alpha;
  int cg_iterations = 0;
  int inner_iterations = 0;  ///< coefficient reweighting rounds (l1 only)
  double epsilon = 0.0;      ///< final smoothing scalar (l1 only)
  bool converged = true;
};

/// Unique minimizer of ||target - design a||^2 + lambda ||a||^2, i.e. the
/// solution of (design^T design + lambda I) a = design^T target, via CG from 0.
SolveReport solve_ridge(const WeightedProblem& problem, double lambda,
                        const CgOptions& cg);

/// Weighted ridge regression (D^T W D + lambda I)^{-1} D^T W y.
Eigen::VectorXd solve_weighted_ridge(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& weights,
    const Eigen::Ref<const Eigen::VectorXd>& y, double lambda,
    const CgOptions& cg = {});

/// Smallest smoothing scalar produced by update_epsilon.
inline constexpr double kEpsilonMin = 1e-10;

/// Rank L = floor(0.01 m) of the coefficient order statistic, at least 1.
Index coefficient_rank(Index m);

/// v_j = lambda / sqrt(alpha_j^2 + epsilon^2).
Eigen::VectorXd update_coef_weights(
    const Eigen::Ref<const Eigen::VectorXd>& alpha, double lambda,
    double epsilon);

/// min(decay * epsilon_prev, L-th largest |alpha_j| / m), floored at
/// kEpsilonMin. decay = 1 is the plain min rule.
double update_epsilon(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                      double epsilon_prev, Index rank, double decay = 1.0);

struct L1Options {
  int inner_max_iter = 20;
  double inner_tol = 1e-4;
  double epsilon0 = 1.0;
  double epsilon_decay = 0.5;
  CgOptions cg;

  static L1Options from(const CoderConfig& config, Index m);
};

/// Approximate minimizer of ||target - design a||^2 + lambda ||a||_1 by
/// iteratively reweighted least squares.
///
/// Each round solves (design^T design + V/2) a = design^T target, V =
/// diag(update_coef_weights(a_prev, lambda, eps)), which minimizes a quadratic
/// majorizer of the eps-smoothed objective ||.||^2 + lambda sum sqrt(a^2+eps^2).
/// Starts from V = I. Stops when the relative coefficient change drops below
/// inner_tol with eps <= sqrt(inner_tol) * max|a|, or after inner_max_iter
/// rounds (converged = false).
SolveReport solve_l1(const WeightedProblem& problem, double lambda,
                     const L1Options& options);

Eigen::VectorXd solve_weighted_l1(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& weights,
    const Eigen::Ref<const Eigen::VectorXd>& y, double lambda,
    const CoderConfig& config);

}  // namespace rrc
