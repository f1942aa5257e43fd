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

/// Floor applied to the demarcation point when the residual quantile is 0.
inline constexpr double kDeltaMin = 1e-12;

/// Position l = floor(tau * n) of the order statistic used for delta,
/// clamped to [1, n].
Index quantile_rank(Index n, double tau);

/// The tau-quantile of the squared residuals: the l-th smallest, with
/// l = quantile_rank(n, tau), floored at kDeltaMin. At most n - l pixels then
/// have e^2 > delta (weight below 0.5), so tau is the trusted fraction.
double estimate_delta(const Eigen::Ref<const Eigen::VectorXd>& residual,
                      double tau);

/// delta from estimate_delta and mu = zeta / delta.
WeightParams make_params(const Eigen::Ref<const Eigen::VectorXd>& residual,
                         double tau, double zeta);

/// Logistic weight 1 / (1 + exp(mu * (e^2 - delta))), in [0, 1].
///
/// The single form is overflow-safe: a huge exponent makes exp() return +inf
/// and the weight 0. Equals 0.5 exactly at e^2 = delta.
double logistic_weight(double e, const WeightParams& params);

/// Robust loss whose weight function rho'(e)/e is logistic_weight:
///   rho(e) = (softplus(mu*delta) - softplus(mu*delta - mu*e^2)) / (2*mu).
/// rho(0) = 0 and rho saturates at softplus(mu*delta) / (2*mu).
double rho_theta(double e, const WeightParams& params);

/// Sum of rho_theta over a residual vector.
double rho_theta_sum(const Eigen::Ref<const Eigen::VectorXd>& residual,
                     const WeightParams& params);

/// Re-estimates (mu, delta) from the residual and evaluates all weights.
WeightState compute_weights(const Eigen::Ref<const Eigen::VectorXd>& residual,
                            double tau, double zeta);

}  // namespace rrc
