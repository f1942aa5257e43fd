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

#include "rrc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rrc {
namespace {

void check_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NumericError(std::string("cg_solve: non-finite ") + what);
  }
}

Eigen::VectorXd sqrt_weights(const Eigen::Ref<const Eigen::VectorXd>& w) {
  if ((w.array() < 0.0).any() || !w.allFinite()) {
    throw DomainError("weights must be finite and non-negative");
  }
  return w.array().sqrt();
}

// Indices of rows kept after dropping weights below the threshold.
std::vector<Index> kept_rows(const Eigen::VectorXd& w,
                             std::optional<double> threshold) {
  std::vector<Index> rows;
  if (!threshold) return rows;
  rows.reserve(static_cast<size_t>(w.size()));
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w[i] < *threshold)) rows.push_back(i);
  }
  return rows;
}

}  // namespace

CgResult cg_solve(const LinearOperator& apply_A, const Eigen::VectorXd& b,
                  const CgOptions& options, const Eigen::VectorXd* x0,
                  const Eigen::VectorXd* inv_diag) {
  CgResult out;
  const Index m = b.size();
  out.x = x0 ? *x0 : Eigen::VectorXd::Zero(m);
  const double b_norm = b.norm();
  check_finite(b_norm, "right-hand side");
  if (b_norm == 0.0) {
    out.x.setZero();
    out.converged = true;
    return out;
  }

  Eigen::VectorXd r = x0 ? Eigen::VectorXd(b - apply_A(out.x)) : b;
  double r_norm = r.norm();
  check_finite(r_norm, "residual");
  Eigen::VectorXd best = out.x;
  double best_norm = r_norm;
  if (r_norm <= options.tol * b_norm) {
    out.relative_residual = r_norm / b_norm;
    out.converged = true;
    return out;
  }

  auto precondition = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (inv_diag) return v.cwiseProduct(*inv_diag);
    return v;
  };
  Eigen::VectorXd z = precondition(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  for (int k = 1; k <= options.max_iter; ++k) {
    const Eigen::VectorXd Ap = apply_A(p);
    const double pAp = p.dot(Ap);
    check_finite(pAp, "curvature");
    out.iterations = k;
    // Loss of positive curvature: the operator is numerically singular in
    // the search direction, so no further progress is possible.
    if (!(pAp > 0.0)) break;
    const double step = rz / pAp;
    out.x += step * p;
    r -= step * Ap;
    r_norm = r.norm();
    check_finite(r_norm, "residual");
    if (r_norm < best_norm) {
      best_norm = r_norm;
      best = out.x;
    }
    if (r_norm <= options.tol * b_norm) {
      out.converged = true;
      break;
    }
    z = precondition(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  if (!out.converged) {
    out.x = best;
    r_norm = best_norm;
  }
  out.relative_residual = r_norm / b_norm;
  return out;
}

WeightedProblem WeightedProblem::pixel(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& weights,
    const Eigen::Ref<const Eigen::VectorXd>& y,
    std::optional<double> drop_threshold) {
  if (weights.size() != atoms.rows() || y.size() != atoms.rows()) {
    throw DomainError("WeightedProblem: dimension mismatch");
  }
  const Eigen::VectorXd s = sqrt_weights(weights);
  WeightedProblem prob;
  const std::vector<Index> rows = kept_rows(weights, drop_threshold);
  if (!drop_threshold || rows.size() == static_cast<size_t>(atoms.rows())) {
    prob.design = s.asDiagonal() * atoms;
    prob.target = s.cwiseProduct(y);
    return prob;
  }
  const auto kept = static_cast<Index>(rows.size());
  prob.dropped_rows = atoms.rows() - kept;
  prob.design.resize(kept, atoms.cols());
  prob.target.resize(kept);
  for (Index r = 0; r < kept; ++r) {
    const Index i = rows[static_cast<size_t>(r)];
    prob.design.row(r) = s[i] * atoms.row(i);
    prob.target[r] = s[i] * y[i];
  }
  return prob;
}

WeightedProblem WeightedProblem::projected(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& weights,
    const Eigen::Ref<const Eigen::VectorXd>& y,
    const Eigen::Ref<const Eigen::MatrixXd>& projection,
    std::optional<double> drop_threshold) {
  if (projection.cols() != atoms.rows()) {
    throw DomainError("WeightedProblem: projection width != signal dimension");
  }
  WeightedProblem pix = pixel(atoms, weights, y, drop_threshold);
  WeightedProblem prob;
  prob.dropped_rows = pix.dropped_rows;
  if (pix.dropped_rows == 0) {
    prob.design.noalias() = projection * pix.design;
    prob.target.noalias() = projection * pix.target;
    return prob;
  }
  // Dropping pixel i removes column i of the projection.
  const std::vector<Index> rows = kept_rows(weights, drop_threshold);
  Eigen::MatrixXd sub(projection.rows(), static_cast<Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    sub.col(static_cast<Index>(r)) = projection.col(rows[r]);
  }
  prob.design.noalias() = sub * pix.design;
  prob.target.noalias() = sub * pix.target;
  return prob;
}

Eigen::VectorXd WeightedProblem::normal_apply(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd u = design * x;
  return design.transpose() * u;
}

Eigen::VectorXd WeightedProblem::normal_rhs() const {
  return design.transpose() * target;
}

Eigen::VectorXd WeightedProblem::normal_diagonal() const {
  return design.colwise().squaredNorm().transpose();
}

SolveReport solve_ridge(const WeightedProblem& problem, double lambda,
                        const CgOptions& cg) {
  const LinearOperator apply = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd out = problem.normal_apply(x);
    out += lambda * x;
    return out;
  };
  CgResult res = cg_solve(apply, problem.normal_rhs(), cg);
  SolveReport report;
  report.alpha = std::move(res.x);
  report.cg_iterations = res.iterations;
  report.converged = res.converged;
  return report;
}

Eigen::VectorXd solve_weighted_ridge(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& weights,
    const Eigen::Ref<const Eigen::VectorXd>& y, double lambda,
    const CgOptions& cg) {
  return solve_ridge(WeightedProblem::pixel(atoms, weights, y), lambda, cg)
      .alpha;
}

Index coefficient_rank(Index m) {
  return std::max<Index>(1, static_cast<Index>(0.01 * static_cast<double>(m)));
}

Eigen::VectorXd update_coef_weights(
    const Eigen::Ref<const Eigen::VectorXd>& alpha, double lambda,
    double epsilon) {
  const double eps2 = epsilon * epsilon;
  return (alpha.array().square() + eps2).rsqrt() * lambda;
}

double update_epsilon(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                      double epsilon_prev, Index rank, double decay) {
  const Index m = alpha.size();
  std::vector<double> mags(alpha.data(), alpha.data() + m);
  for (double& a : mags) a = std::abs(a);
  const Index l = std::clamp<Index>(rank, 1, m);
  // l-th largest == (m - l)-th smallest.
  auto nth = mags.begin() + (m - l);
  std::nth_element(mags.begin(), nth, mags.end());
  const double candidate = *nth / static_cast<double>(m);
  return std::max(std::min(decay * epsilon_prev, candidate), kEpsilonMin);
}

L1Options L1Options::from(const CoderConfig& config, Index m) {
  L1Options o;
  o.inner_max_iter = config.irls_inner_max_iter;
  o.inner_tol = config.irls_inner_tol;
  o.epsilon0 = config.epsilon0;
  o.epsilon_decay = config.epsilon_decay;
  o.cg.tol = config.cg_tol;
  o.cg.max_iter = config.effective_cg_max_iter(m);
  return o;
}

SolveReport solve_l1(const WeightedProblem& problem, double lambda,
                     const L1Options& options) {
  const Index m = problem.atoms();
  const Eigen::VectorXd rhs = problem.normal_rhs();
  const Eigen::VectorXd gram_diag = problem.normal_diagonal();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m);

  SolveReport report;
  auto solve = [&](const Eigen::VectorXd* x0) {
    const Eigen::VectorXd half_v = 0.5 * v;
    const LinearOperator apply = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd out = problem.normal_apply(x);
      out += half_v.cwiseProduct(x);
      return out;
    };
    const Eigen::VectorXd inv_diag = (gram_diag + half_v).cwiseInverse();
    CgResult res = cg_solve(apply, rhs, options.cg, x0, &inv_diag);
    report.cg_iterations += res.iterations;
    report.converged = report.converged && res.converged;
    return std::move(res.x);
  };

  Eigen::VectorXd alpha = solve(nullptr);
  double eps = options.epsilon0;
  const Index rank = coefficient_rank(m);
  const double settled = std::sqrt(options.inner_tol);
  bool done = false;
  for (int k = 1; k <= options.inner_max_iter; ++k) {
    eps = update_epsilon(alpha, eps, rank, options.epsilon_decay);
    v = update_coef_weights(alpha, lambda, eps);
    Eigen::VectorXd next = solve(&alpha);
    const double prev_norm = alpha.norm();
    const double change = prev_norm > 0.0 ? (next - alpha).norm() / prev_norm
                          : (next.norm() > 0.0 ? 1.0 : 0.0);
    alpha = std::move(next);
    report.inner_iterations = k;
    const double peak = alpha.cwiseAbs().maxCoeff();
    if (change < options.inner_tol && (eps <= settled * peak || peak == 0.0)) {
      done = true;
      break;
    }
  }
  report.alpha = std::move(alpha);
  report.epsilon = eps;
  report.converged = report.converged && done;
  return report;
}

Eigen::VectorXd solve_weighted_l1(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& weights,
    const Eigen::Ref<const Eigen::VectorXd>& y, double lambda,
    const CoderConfig& config) {
  return solve_l1(WeightedProblem::pixel(atoms, weights, y), lambda,
                  L1Options::from(config, atoms.cols()))
      .alpha;
}

}  // namespace rrc
