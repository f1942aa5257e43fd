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

#include "rrc/ir3c.hpp"

#include <cmath>
#include <sstream>

#include "rrc/classify.hpp"
#include "rrc/solver.hpp"
#include "rrc/weights.hpp"

namespace rrc {
namespace {

WeightState estimate_weights(const Eigen::VectorXd& residual,
                             const CoderConfig& config) {
  WeightState state = compute_weights(residual, config.tau, config.zeta);
  if (config.fixed_unit_weights) state.weights.setOnes();
  return state;
}

double coefficient_penalty(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                           const CoderConfig& config) {
  const double norm = config.beta == 1 ? alpha.lpNorm<1>()
                                       : alpha.squaredNorm();
  return config.lambda * norm;
}

}  // namespace

Eigen::VectorXd init_alpha(Index m) {
  if (m < 1) throw DomainError("init_alpha: m must be >= 1");
  return Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
}

double objective(const Eigen::Ref<const Eigen::VectorXd>& alpha,
                 const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                 const Eigen::Ref<const Eigen::VectorXd>& y,
                 const WeightParams& params, const CoderConfig& config) {
  const Eigen::VectorXd residual = y - atoms * alpha;
  return rho_theta_sum(residual, params) + coefficient_penalty(alpha, config);
}

LineSearchResult line_search(const Eigen::Ref<const Eigen::VectorXd>& alpha_prev,
                             const Eigen::Ref<const Eigen::VectorXd>& alpha_star,
                             const Eigen::Ref<const Eigen::MatrixXd>& atoms,
                             const Eigen::Ref<const Eigen::VectorXd>& y,
                             const WeightParams& params,
                             const CoderConfig& config) {
  LineSearchResult out;
  out.objective_before = objective(alpha_prev, atoms, y, params, config);
  const Eigen::VectorXd direction = alpha_star - alpha_prev;
  double nu = 1.0;
  for (int k = 0; k <= config.max_line_search_halvings; ++k, nu *= 0.5) {
    Eigen::VectorXd trial = alpha_prev + nu * direction;
    const double value = objective(trial, atoms, y, params, config);
    if (value < out.objective_before) {
      out.step = nu;
      out.alpha = std::move(trial);
      out.objective = value;
      out.accepted = true;
      return out;
    }
  }
  out.alpha = alpha_prev;
  out.objective = out.objective_before;
  return out;
}

double weight_change(const Eigen::Ref<const Eigen::VectorXd>& w_prev,
                     const Eigen::Ref<const Eigen::VectorXd>& w_curr) {
  return (w_curr - w_prev).norm() / w_prev.norm();
}

bool check_convergence(const Eigen::Ref<const Eigen::VectorXd>& w_prev,
                       const Eigen::Ref<const Eigen::VectorXd>& w_curr,
                       double delta_w) {
  return weight_change(w_prev, w_curr) < delta_w;
}

namespace detail {

CodingResult code_query(const Dictionary& dict, const QuerySignal& query,
                        const CoderConfig& config,
                        const Eigen::MatrixXd* projection) {
  config.validate();
  const Eigen::MatrixXd& atoms = dict.atoms();
  const Eigen::VectorXd& y = query.values();
  if (y.size() != dict.dim()) {
    std::ostringstream ss;
    ss << "run_ir3c: query has " << y.size() << " entries, dictionary rows "
       << dict.dim();
    throw DomainError(ss.str());
  }
  const Index m = dict.size();
  CgOptions cg;
  cg.tol = config.cg_tol;
  cg.max_iter = config.effective_cg_max_iter(m);
  const L1Options l1 = L1Options::from(config, m);

  CodingResult result;
  Eigen::VectorXd alpha = init_alpha(m);
  WeightState state = estimate_weights(y - atoms * alpha, config);
  result.stop_reason = StopReason::kMaxIterations;

  for (int t = 1; t <= config.max_outer_iter; ++t) {
    const WeightedProblem problem =
        projection ? WeightedProblem::projected(atoms, state.weights, y,
                                                *projection,
                                                config.pixel_drop_threshold)
                   : WeightedProblem::pixel(atoms, state.weights, y,
                                            config.pixel_drop_threshold);
    SolveReport step;
    try {
      step = config.beta == 2 ? solve_ridge(problem, config.lambda, cg)
                              : solve_l1(problem, config.lambda, l1);
    } catch (const NumericError& e) {
      std::ostringstream ss;
      ss << "IR3C iteration " << t << ": " << e.what();
      throw NumericError(ss.str());
    }
    result.solver_converged = result.solver_converged && step.converged;

    IterationRecord rec;
    rec.dropped_pixels = problem.dropped_rows;
    rec.solver_iterations = step.cg_iterations;
    if (t == 1) {
      rec.objective_before = objective(alpha, atoms, y, state.params, config);
      alpha = std::move(step.alpha);
      rec.objective = objective(alpha, atoms, y, state.params, config);
      rec.step = 1.0;
    } else {
      LineSearchResult ls =
          line_search(alpha, step.alpha, atoms, y, state.params, config);
      if (!ls.accepted) {
        result.stop_reason = StopReason::kLineSearchStalled;
        break;
      }
      alpha = std::move(ls.alpha);
      rec.objective = ls.objective;
      rec.objective_before = ls.objective_before;
      rec.step = ls.step;
    }
    result.iterations = t;

    rec.reconstruction = atoms * alpha;
    WeightState next = estimate_weights(y - rec.reconstruction, config);
    rec.weight_change = weight_change(state.weights, next.weights);
    state = std::move(next);
    result.objective_trace.push_back(rec.objective);
    const bool converged = rec.weight_change < config.delta_w;
    result.trace.push_back(std::move(rec));
    if (converged) {
      result.stop_reason = StopReason::kWeightsConverged;
      break;
    }
  }

  result.residual = y - atoms * alpha;
  result.alpha = std::move(alpha);
  result.final_weights = std::move(state);
  result.degenerate_weights = (result.final_weights.weights.array() == 0.0).all();
  return result;
}

}  // namespace detail

CodingResult run_ir3c(const Dictionary& dict, const QuerySignal& y,
                      const CoderConfig& config) {
  CodingResult result = detail::code_query(dict, y, config, nullptr);
  result.per_class_residuals = class_residuals(result, dict, y);
  result.predicted_class = predict(result.per_class_residuals);
  result.sci = sci(result.alpha, dict.partition());
  return result;
}

}  // namespace rrc
