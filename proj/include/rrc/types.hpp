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

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrc {

using Index = Eigen::Index;

/// Invalid input values: zero vectors, non-finite entries, bad shapes.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Non-finite values appearing inside an iterative solver.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Returns v / ||v||_2. Throws DomainError for all-zero or non-finite input.
Eigen::VectorXd normalize(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Class labels of the dictionary atoms. The class count is derived from the
/// labels: ids must cover [0, k) with every id present at least once.
class ClassPartition {
 public:
  ClassPartition() = default;
  explicit ClassPartition(std::vector<int> labels);

  int num_classes() const { return num_classes_; }
  Index size() const { return static_cast<Index>(labels_.size()); }
  int label(Index atom) const { return labels_[static_cast<size_t>(atom)]; }
  const std::vector<int>& labels() const { return labels_; }

  /// Atom indices belonging to class c, in ascending order.
  const std::vector<Index>& members(int c) const {
    return members_[static_cast<size_t>(c)];
  }

 private:
  std::vector<int> labels_;
  std::vector<std::vector<Index>> members_;
  int num_classes_ = 0;
};

/// n x m matrix of unit-norm atoms (one training sample per column) together
/// with their class partition. Columns are normalized on construction.
class Dictionary {
 public:
  Dictionary(Eigen::MatrixXd columns, ClassPartition partition);

  const Eigen::MatrixXd& atoms() const { return atoms_; }
  const ClassPartition& partition() const { return partition_; }
  Index dim() const { return atoms_.rows(); }
  Index size() const { return atoms_.cols(); }
  int num_classes() const { return partition_.num_classes(); }

 private:
  Eigen::MatrixXd atoms_;
  ClassPartition partition_;
};

/// Unit-norm query vector (pixels or features).
class QuerySignal {
 public:
  explicit QuerySignal(const Eigen::Ref<const Eigen::VectorXd>& raw)
      : values_(normalize(raw)) {}

  const Eigen::VectorXd& values() const { return values_; }
  Index dim() const { return values_.size(); }

 private:
  Eigen::VectorXd values_;
};

/// Parameters of the IR3C coder.
///
/// Defaults follow the clean-face setting: lambda = 1e-3, tau = 0.8, and
/// mu * delta = zeta = 8. For occluded or corrupted queries tau = 0.6 works
/// better: the weight crosses 0.5 at the tau-quantile of squared residuals, so
/// tau bounds the fraction of pixels that may be treated as inliers.
struct CoderConfig {
  int beta = 2;  ///< 1: l1 coefficient prior (RRC_L1), 2: l2 prior (RRC_L2).
  double lambda = 1e-3;
  double tau = 0.8;
  double zeta = 8.0;
  double delta_w = 0.01;
  int max_outer_iter = 50;
  int max_line_search_halvings = 10;
  double cg_tol = 1e-8;
  int cg_max_iter = 0;  ///< 0 selects 2 * m.
  int irls_inner_max_iter = 20;
  double irls_inner_tol = 1e-4;
  double epsilon0 = 1.0;
  double epsilon_decay = 0.5;
  std::optional<double> pixel_drop_threshold;
  /// Replaces every estimated weight by 1 (plain regularized coding).
  bool fixed_unit_weights = false;

  /// Throws DomainError for invalid values; returns human-readable warnings
  /// for legal but unusual settings (e.g. zeta < 8).
  std::vector<std::string> validate() const;
  int effective_cg_max_iter(Index m) const {
    return cg_max_iter > 0 ? cg_max_iter : static_cast<int>(2 * m);
  }
};

/// Parameters of the logistic weight function.
struct WeightParams {
  double mu = 0.0;     ///< decay rate
  double delta = 0.0;  ///< demarcation point, in units of squared residual
};

/// Diagonal residual weights plus the parameters that produced them.
struct WeightState {
  Eigen::VectorXd weights;
  WeightParams params;
};

enum class StopReason {
  kWeightsConverged,
  kLineSearchStalled,
  kMaxIterations,
};

const char* to_string(StopReason reason);

/// One accepted outer iteration of IR3C.
struct IterationRecord {
  double objective = 0.0;         ///< objective at the new iterate
  double objective_before = 0.0;  ///< previous iterate, same weight params
  double step = 1.0;              ///< line-search step nu
  double weight_change = 0.0;     ///< relative l2 change of the weights
  Index dropped_pixels = 0;
  int solver_iterations = 0;      ///< CG iterations spent in the coding step
  Eigen::VectorXd reconstruction; ///< D * alpha after the update
};

struct CodingResult {
  Eigen::VectorXd alpha;
  WeightState final_weights;
  Eigen::VectorXd residual;
  std::vector<double> per_class_residuals;
  int predicted_class = 0;
  double sci = 0.0;
  std::vector<double> objective_trace;
  int iterations = 0;
  std::vector<IterationRecord> trace;
  StopReason stop_reason = StopReason::kMaxIterations;
  /// False when any inner solve hit its iteration cap.
  bool solver_converged = true;
  /// Final weights are all zero, so every class residual is 0.
  bool degenerate_weights = false;
};

}  // namespace rrc
