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

#include <vector>

#include "rrc/types.hpp"

namespace rrc {

/// l_c = ||W^{1/2} (y - D_c alpha_c)||_2 for every class c, using only the
/// class-c atoms and coefficients. With a projection P (d x n) the norm is
/// taken after projecting: ||P W^{1/2} (y - D_c alpha_c)||_2.
std::vector<double> class_residuals(
    const Eigen::Ref<const Eigen::VectorXd>& alpha,
    const Eigen::Ref<const Eigen::VectorXd>& weights, const Dictionary& dict,
    const Eigen::Ref<const Eigen::VectorXd>& y,
    const Eigen::MatrixXd* projection = nullptr);

/// Residuals with the final weights of a coding result.
std::vector<double> class_residuals(const CodingResult& result,
                                    const Dictionary& dict,
                                    const QuerySignal& y);

/// argmin of the residuals; ties go to the lowest class id.
int predict(const std::vector<double>& residuals);

/// Sparsity concentration index
///   (k * max_c ||alpha_c||_1 / ||alpha||_1 - 1) / (k - 1),
/// 1 for k = 1 and 0 for an all-zero alpha.
double sci(const Eigen::Ref<const Eigen::VectorXd>& alpha,
           const ClassPartition& partition);

struct ValidationScore {
  double sci = 0.0;
  int predicted_class = 0;
  bool accept = false;
};

ValidationScore validate(const CodingResult& result, double threshold);

/// Linear feature extractor x -> basis * (x - mean) with orthonormal rows.
class PcaModel {
 public:
  /// Throws DomainError unless basis * basis^T = I within 1e-8.
  PcaModel(Eigen::VectorXd mean, Eigen::MatrixXd basis,
           Eigen::VectorXd eigenvalues = {});

  /// Identity basis on n pixels with zero mean.
  static PcaModel identity(Index n);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  /// Eigenvalues of the centered scatter matrix, descending. Empty when the
  /// model was not produced by fit_pca.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  Index dim() const { return basis_.rows(); }
  Index input_dim() const { return basis_.cols(); }

  Eigen::VectorXd project(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd reconstruct(const Eigen::Ref<const Eigen::VectorXd>& f) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXd eigenvalues_;
};

/// Principal subspace of the mean-centered training columns, d leading
/// components. Throws DomainError when d exceeds the numerical rank.
PcaModel fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& training, Index d);

enum class ResidualDomain { kProjected, kPixel };

/// IR3C whose coding step minimizes ||P W^{1/2} (y - D alpha)||^2 plus the
/// coefficient prior. Residuals and weights are estimated in pixel domain;
/// classification residuals use `domain`.
CodingResult run_ir3c_pca(const Dictionary& dict, const QuerySignal& y,
                          const PcaModel& pca, const CoderConfig& config,
                          ResidualDomain domain = ResidualDomain::kProjected);

}  // namespace rrc
