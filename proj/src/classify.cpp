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

#include "rrc/classify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rrc/ir3c.hpp"

namespace rrc {

std::vector<double> class_residuals(
    const Eigen::Ref<const Eigen::VectorXd>& alpha,
    const Eigen::Ref<const Eigen::VectorXd>& weights, const Dictionary& dict,
    const Eigen::Ref<const Eigen::VectorXd>& y,
    const Eigen::MatrixXd* projection) {
  const ClassPartition& part = dict.partition();
  if (alpha.size() != dict.size() || weights.size() != dict.dim() ||
      y.size() != dict.dim()) {
    throw DomainError("class_residuals: dimension mismatch");
  }
  const Eigen::VectorXd s = weights.array().sqrt();
  std::vector<double> out(static_cast<size_t>(part.num_classes()));
  for (int c = 0; c < part.num_classes(); ++c) {
    Eigen::VectorXd r = y;
    for (Index j : part.members(c)) {
      r.noalias() -= alpha[j] * dict.atoms().col(j);
    }
    const Eigen::VectorXd weighted = s.cwiseProduct(r);
    out[static_cast<size_t>(c)] =
        projection ? (*projection * weighted).norm() : weighted.norm();
  }
  return out;
}

std::vector<double> class_residuals(const CodingResult& result,
                                    const Dictionary& dict,
                                    const QuerySignal& y) {
  return class_residuals(result.alpha, result.final_weights.weights, dict,
                         y.values());
}

int predict(const std::vector<double>& residuals) {
  if (residuals.empty()) throw DomainError("predict: no classes");
  // min_element returns the first minimum, so ties go to the lowest id.
  return static_cast<int>(
      std::min_element(residuals.begin(), residuals.end()) - residuals.begin());
}

double sci(const Eigen::Ref<const Eigen::VectorXd>& alpha,
           const ClassPartition& partition) {
  if (alpha.size() != partition.size()) {
    throw DomainError("sci: alpha length != partition size");
  }
  const int k = partition.num_classes();
  const double total = alpha.lpNorm<1>();
  if (!(total > 0.0)) return 0.0;
  if (k == 1) return 1.0;
  double peak = 0.0;
  for (int c = 0; c < k; ++c) {
    double mass = 0.0;
    for (Index j : partition.members(c)) mass += std::abs(alpha[j]);
    peak = std::max(peak, mass);
  }
  const double value = (k * (peak / total) - 1.0) / (k - 1.0);
  return std::clamp(value, 0.0, 1.0);
}

ValidationScore validate(const CodingResult& result, double threshold) {
  ValidationScore score;
  score.sci = result.sci;
  score.predicted_class = result.predicted_class;
  score.accept = result.sci >= threshold;
  return score;
}

PcaModel::PcaModel(Eigen::VectorXd mean, Eigen::MatrixXd basis,
                   Eigen::VectorXd eigenvalues)
    : mean_(std::move(mean)),
      basis_(std::move(basis)),
      eigenvalues_(std::move(eigenvalues)) {
  if (basis_.rows() < 1 || basis_.rows() > basis_.cols()) {
    throw DomainError("PcaModel: need 1 <= d <= n");
  }
  if (mean_.size() != basis_.cols()) {
    throw DomainError("PcaModel: mean length != basis width");
  }
  const Eigen::MatrixXd gram = basis_ * basis_.transpose();
  const double err =
      (gram - Eigen::MatrixXd::Identity(basis_.rows(), basis_.rows()))
          .cwiseAbs()
          .maxCoeff();
  if (!(err <= 1e-8)) {
    std::ostringstream ss;
    ss << "PcaModel: basis rows not orthonormal (max |PP^T - I| = " << err
       << ")";
    throw DomainError(ss.str());
  }
}

PcaModel PcaModel::identity(Index n) {
  return PcaModel(Eigen::VectorXd::Zero(n), Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd PcaModel::project(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return basis_ * (x - mean_);
}

Eigen::VectorXd PcaModel::reconstruct(
    const Eigen::Ref<const Eigen::VectorXd>& f) const {
  return basis_.transpose() * f + mean_;
}

PcaModel fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& training, Index d) {
  const Index n = training.rows();
  const Index m = training.cols();
  if (d < 1 || d > std::min(n, m)) {
    std::ostringstream ss;
    ss << "fit_pca: d = " << d << " outside [1, min(n, m) = "
       << std::min(n, m) << "]";
    throw DomainError(ss.str());
  }
  const Eigen::VectorXd mean = training.rowwise().mean();
  const Eigen::MatrixXd centered = training.colwise() - mean;

  // Eigen-decompose the smaller of X X^T (n x n) and X^T X (m x m); both share
  // their nonzero spectrum.
  const bool gram_trick = m < n;
  const Eigen::MatrixXd small = gram_trick
                                    ? Eigen::MatrixXd(centered.transpose() * centered)
                                    : Eigen::MatrixXd(centered * centered.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(small);
  if (eig.info() != Eigen::Success) {
    throw NumericError("fit_pca: eigendecomposition failed");
  }
  // Ascending order from Eigen; take the top d from the back.
  const Index size = small.rows();
  const Eigen::VectorXd values = eig.eigenvalues().reverse();
  const double top = std::max(values[0], 0.0);
  const double floor = 1e-10 * std::max(top, 1e-300);
  if (!(values[d - 1] > floor)) {
    std::ostringstream ss;
    ss << "fit_pca: d = " << d << " exceeds the rank of the centered data";
    throw DomainError(ss.str());
  }

  Eigen::MatrixXd basis(d, n);
  for (Index i = 0; i < d; ++i) {
    const Eigen::VectorXd v = eig.eigenvectors().col(size - 1 - i);
    if (gram_trick) {
      basis.row(i) = (centered * v).transpose() / std::sqrt(values[i]);
    } else {
      basis.row(i) = v.transpose();
    }
  }
  Eigen::VectorXd kept = values.cwiseMax(0.0);
  return PcaModel(mean, std::move(basis), std::move(kept));
}

CodingResult run_ir3c_pca(const Dictionary& dict, const QuerySignal& y,
                          const PcaModel& pca, const CoderConfig& config,
                          ResidualDomain domain) {
  if (pca.input_dim() != dict.dim()) {
    throw DomainError("run_ir3c_pca: PCA input dimension != dictionary rows");
  }
  const Eigen::MatrixXd& projection = pca.basis();
  CodingResult result = detail::code_query(dict, y, config, &projection);
  result.per_class_residuals = class_residuals(
      result.alpha, result.final_weights.weights, dict, y.values(),
      domain == ResidualDomain::kProjected ? &projection : nullptr);
  result.predicted_class = predict(result.per_class_residuals);
  result.sci = sci(result.alpha, dict.partition());
  return result;
}

}  // namespace rrc
