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

#include "rrc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace rrc {
namespace {

// log(1 + exp(x)) without overflow.
double softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

Index quantile_rank(Index n, double tau) {
  // The small offset keeps products like 0.29 * 100 from flooring to 28.
  auto l = static_cast<Index>(std::floor(tau * static_cast<double>(n) + 1e-9));
  return std::clamp<Index>(l, 1, n);
}

double estimate_delta(const Eigen::Ref<const Eigen::VectorXd>& residual,
                      double tau) {
  const Index n = residual.size();
  if (n < 1) {
    throw DomainError("estimate_delta: empty residual");
  }
  if (!residual.allFinite()) {
    throw DomainError("estimate_delta: non-finite residual");
  }
  std::vector<double> squares(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    squares[static_cast<size_t>(i)] = residual[i] * residual[i];
  }
  const Index l = quantile_rank(n, tau);
  auto nth = squares.begin() + (l - 1);
  std::nth_element(squares.begin(), nth, squares.end());
  return std::max(*nth, kDeltaMin);
}

WeightParams make_params(const Eigen::Ref<const Eigen::VectorXd>& residual,
                         double tau, double zeta) {
  WeightParams p;
  p.delta = estimate_delta(residual, tau);
  p.mu = zeta / p.delta;
  return p;
}

double logistic_weight(double e, const WeightParams& params) {
  const double z = params.mu * (e * e - params.delta);
  return 1.0 / (1.0 + std::exp(z));
}

double rho_theta(double e, const WeightParams& params) {
  const double md = params.mu * params.delta;
  return (softplus(md) - softplus(md - params.mu * e * e)) / (2.0 * params.mu);
}

double rho_theta_sum(const Eigen::Ref<const Eigen::VectorXd>& residual,
                     const WeightParams& params) {
  double s = 0.0;
  for (Index i = 0; i < residual.size(); ++i) {
    s += rho_theta(residual[i], params);
  }
  return s;
}

WeightState compute_weights(const Eigen::Ref<const Eigen::VectorXd>& residual,
                            double tau, double zeta) {
  WeightState state;
  state.params = make_params(residual, tau, zeta);
  state.weights.resize(residual.size());
  for (Index i = 0; i < residual.size(); ++i) {
    state.weights[i] = logistic_weight(residual[i], state.params);
  }
  return state;
}

}  // namespace rrc
