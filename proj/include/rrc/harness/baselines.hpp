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

#include "rrc/solver.hpp"
#include "rrc/types.hpp"

namespace rrc::harness {

struct BaselineResult {
  int predicted_class = 0;
  std::vector<double> residuals;  ///< per class; empty for nearest neighbour
  Eigen::VectorXd alpha;          ///< ridge coefficients; empty for NN
  double sci = 0.0;
};

/// Unweighted regularized least squares (collaborative representation):
/// alpha = (D^T D + lambda I)^{-1} D^T y, classified by the class-wise
/// reconstruction residual ||y - D_c alpha_c||.
BaselineResult baseline_ridge(const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                              const Eigen::Ref<const Eigen::VectorXd>& y,
                              double lambda, const ClassPartition& partition,
                              const CgOptions& cg);

/// Same, with the CG settings a CoderConfig would use.
BaselineResult baseline_ridge(const Dictionary& dict, const QuerySignal& y,
                              const CoderConfig& config);

/// Nearest atom by Euclidean distance; ties go to the lower atom index.
BaselineResult baseline_nn(const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                           const Eigen::Ref<const Eigen::VectorXd>& y,
                           const ClassPartition& partition);

}  // namespace rrc::harness
