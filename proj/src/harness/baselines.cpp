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

#include "rrc/harness/baselines.hpp"

#include <sstream>

#include "rrc/classify.hpp"

namespace rrc::harness {
namespace {

void check_shapes(const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                  const Eigen::Ref<const Eigen::VectorXd>& y,
                  const ClassPartition& partition) {
  if (atoms.rows() != y.size() || atoms.cols() != partition.size() ||
      atoms.cols() == 0) {
    std::ostringstream ss;
    ss << "baseline: atoms " << atoms.rows() << "x" << atoms.cols()
       << ", query " << y.size() << ", labels " << partition.size();
    throw DomainError(ss.str());
  }
}

// class_residuals needs a Dictionary; this computes the same quantity with
// unit weights directly on the matrix.
std::vector<double> unweighted_residuals(
    const Eigen::Ref<const Eigen::MatrixXd>& atoms,
    const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::VectorXd& alpha,
    const ClassPartition& partition) {
  std::vector<double> out(static_cast<size_t>(partition.num_classes()));
  for (int c = 0; c < partition.num_classes(); ++c) {
    Eigen::VectorXd r = y;
    for (Index j : partition.members(c)) r -= alpha[j] * atoms.col(j);
    out[static_cast<size_t>(c)] = r.norm();
  }
  return out;
}

}  // namespace

BaselineResult baseline_ridge(const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                              const Eigen::Ref<const Eigen::VectorXd>& y,
                              double lambda, const ClassPartition& partition,
                              const CgOptions& cg) {
  check_shapes(atoms, y, partition);
  BaselineResult out;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.size());
  out.alpha = solve_weighted_ridge(atoms, ones, y, lambda, cg);
  out.residuals = unweighted_residuals(atoms, y, out.alpha, partition);
  out.predicted_class = predict(out.residuals);
  out.sci = sci(out.alpha, partition);
  return out;
}

BaselineResult baseline_ridge(const Dictionary& dict, const QuerySignal& y,
                              const CoderConfig& config) {
  CgOptions cg;
  cg.tol = config.cg_tol;
  cg.max_iter = config.effective_cg_max_iter(dict.size());
  BaselineResult out;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y.dim());
  out.alpha = solve_weighted_ridge(dict.atoms(), ones, y.values(),
                                   config.lambda, cg);
  out.residuals = class_residuals(out.alpha, ones, dict, y.values());
  out.predicted_class = predict(out.residuals);
  out.sci = sci(out.alpha, dict.partition());
  return out;
}

BaselineResult baseline_nn(const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           const ClassPartition& partition) {
  check_shapes(atoms, y, partition);
  Index best = 0;
  double best_d = (atoms.col(0) - y).squaredNorm();
  for (Index j = 1; j < atoms.cols(); ++j) {
    const double d = (atoms.col(j) - y).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  BaselineResult out;
  out.predicted_class = partition.label(best);
  return out;
}

}  // namespace rrc::harness
