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

#include "rrc/types.hpp"

namespace rrc {

/// Uniform start [1/m, ..., 1/m]: D * alpha is the mean training atom.
Eigen::VectorXd init_alpha(Index m);

/// Robust coding objective
///   sum_i rho_theta(y_i - r_i alpha) + lambda * sum_j |alpha_j|^beta
/// with the weight parameters `params` held fixed.
double objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                 const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                 const Eigen::Ref<const Eigen::VectorXd>& y,
                 const WeightParams& params, const CoderConfig& config);

struct LineSearchResult {
  double step = 0.0;  ///< 0 when no trial step decreased the objective
  Eigen::VectorXd alpha;
  double objective = 0.0;
  double objective_before = 0.0;
  bool accepted = false;
};

/// Backtracking search along alpha_prev + nu (alpha_star - alpha_prev) for
/// nu = 1, 1/2, ..., 2^-max_line_search_halvings. Accepts the first nu with a
/// strict objective decrease; both sides use the same `params`.
LineSearchResult line_search(const Eigen::Ref<const Eigen::VectorXd>& alpha_prev,
                             const Eigen::Ref<const Eigen::VectorXd>& alpha_star,
                             const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                             const Eigen::Ref<const Eigen::VectorXd>& y,
                             const WeightParams& params,
                             const CoderConfig& config);

/// ||w_curr - w_prev||_2 / ||w_prev||_2.
double weight_change(const Eigen::Ref<const Eigen::VectorXd>& w_prev,
                     const Eigen::Ref<const Eigen::VectorXd>& w_curr);

bool check_convergence(const Eigen::Ref<const Eigen::VectorXd>& w_prev,
                       const Eigen::Ref<const Eigen::VectorXd>& w_curr,
                       double delta_w);

/// Codes y over D with iteratively reweighted regularized robust coding and
/// classifies it by the weighted per-class residual.
CodingResult run_ir3c(const Dictionary& dict, const QuerySignal& y,
                      const CoderConfig& config);

namespace detail {

/// The outer loop shared by the pixel-domain and projected coders. When
/// `projection` is non-null the coding step works on projection * W^{1/2}
/// (y - D alpha); residuals, weights and the objective stay in pixel domain.
/// Fills everything except the classification fields.
CodingResult code_query(const Dictionary& dict, const QuerySignal& y,
                        const CoderConfig& config,
                        const Eigen::MatrixXd* projection);

}  // namespace detail
}  // namespace rrc
