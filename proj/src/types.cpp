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

#include "rrc/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rrc {

Eigen::VectorXd normalize(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (!v.allFinite()) {
    throw DomainError("normalize: non-finite entry");
  }
  const double norm = v.norm();
  if (!(norm > 0.0)) {
    throw DomainError("normalize: zero vector");
  }
  return v / norm;
}

ClassPartition::ClassPartition(std::vector<int> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw DomainError("ClassPartition: no labels");
  }
  const auto [lo, hi] = std::minmax_element(labels_.begin(), labels_.end());
  if (*lo < 0) {
    throw DomainError("ClassPartition: negative class id");
  }
  num_classes_ = *hi + 1;
  members_.assign(static_cast<size_t>(num_classes_), {});
  for (size_t j = 0; j < labels_.size(); ++j) {
    members_[static_cast<size_t>(labels_[j])].push_back(static_cast<Index>(j));
  }
  for (int c = 0; c < num_classes_; ++c) {
    if (members_[static_cast<size_t>(c)].empty()) {
      std::ostringstream ss;
      ss << "ClassPartition: class " << c << " has no atoms";
      throw DomainError(ss.str());
    }
  }
}

Dictionary::Dictionary(Eigen::MatrixXd columns, ClassPartition partition)
    : atoms_(std::move(columns)), partition_(std::move(partition)) {
  if (atoms_.rows() < 1 || atoms_.cols() < 1) {
    throw DomainError("Dictionary: empty matrix");
  }
  if (partition_.size() != atoms_.cols()) {
    std::ostringstream ss;
    ss << "Dictionary: " << atoms_.cols() << " atoms but "
       << partition_.size() << " labels";
    throw DomainError(ss.str());
  }
  for (Index j = 0; j < atoms_.cols(); ++j) {
    try {
      atoms_.col(j) = normalize(atoms_.col(j));
    } catch (const DomainError& e) {
      std::ostringstream ss;
      ss << "Dictionary: atom " << j << ": " << e.what();
      throw DomainError(ss.str());
    }
  }
}

std::vector<std::string> CoderConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw DomainError("CoderConfig: " + what);
  };
  if (beta != 1 && beta != 2) fail("beta must be 1 or 2");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be >= 0");
  if (!(tau > 0.0 && tau < 1.0)) fail("tau must lie in (0, 1)");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) fail("zeta must be > 0");
  if (!(delta_w > 0.0)) fail("delta_w must be > 0");
  if (max_outer_iter < 1) fail("max_outer_iter must be >= 1");
  if (max_line_search_halvings < 1) fail("max_line_search_halvings must be >= 1");
  if (!(cg_tol > 0.0)) fail("cg_tol must be > 0");
  if (cg_max_iter < 0) fail("cg_max_iter must be >= 0");
  if (irls_inner_max_iter < 1) fail("irls_inner_max_iter must be >= 1");
  if (!(irls_inner_tol > 0.0)) fail("irls_inner_tol must be > 0");
  if (!(epsilon0 > 0.0)) fail("epsilon0 must be > 0");
  if (!(epsilon_decay > 0.0 && epsilon_decay <= 1.0)) {
    fail("epsilon_decay must lie in (0, 1]");
  }
  if (pixel_drop_threshold &&
      !(*pixel_drop_threshold >= 0.0 && *pixel_drop_threshold < 1.0)) {
    fail("pixel_drop_threshold must lie in [0, 1)");
  }
  if (beta == 1 && !(lambda > 0.0)) fail("beta = 1 requires lambda > 0");

  std::vector<std::string> warnings;
  if (zeta < 8.0) {
    warnings.emplace_back(
        "zeta < 8: the weight of a zero residual is noticeably below 1");
  }
  return warnings;
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kWeightsConverged: return "weights_converged";
    case StopReason::kLineSearchStalled: return "line_search_stalled";
    case StopReason::kMaxIterations: return "max_iterations";
  }
  return "unknown";
}

}  // namespace rrc
