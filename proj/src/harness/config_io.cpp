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

#include "rrc/harness/config_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

namespace rrc::harness {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& known,
                    const char* what) {
  if (!j.is_object()) {
    throw std::invalid_argument(std::string(what) + ": expected a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) {
      throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

json vec_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

CoderConfig coder_from_json(const json& j, CoderConfig c) {
  reject_unknown(j,
                 {"beta", "lambda", "tau", "zeta", "delta_w", "max_outer_iter",
                  "max_line_search_halvings", "cg_tol", "cg_max_iter",
                  "irls_inner_max_iter", "irls_inner_tol", "epsilon0",
                  "epsilon_decay", "pixel_drop_threshold", "fixed_unit_weights"},
                 "coder");
  take(j, "beta", c.beta);
  take(j, "lambda", c.lambda);
  take(j, "tau", c.tau);
  take(j, "zeta", c.zeta);
  take(j, "delta_w", c.delta_w);
  take(j, "max_outer_iter", c.max_outer_iter);
  take(j, "max_line_search_halvings", c.max_line_search_halvings);
  take(j, "cg_tol", c.cg_tol);
  take(j, "cg_max_iter", c.cg_max_iter);
  take(j, "irls_inner_max_iter", c.irls_inner_max_iter);
  take(j, "irls_inner_tol", c.irls_inner_tol);
  take(j, "epsilon0", c.epsilon0);
  take(j, "epsilon_decay", c.epsilon_decay);
  take(j, "fixed_unit_weights", c.fixed_unit_weights);
  if (j.contains("pixel_drop_threshold")) {
    const auto& v = j.at("pixel_drop_threshold");
    if (v.is_null()) {
      c.pixel_drop_threshold.reset();
    } else {
      c.pixel_drop_threshold = v.get<double>();
    }
  }
  return c;
}

json to_json(const CoderConfig& c) {
  json j = {{"beta", c.beta},
            {"lambda", c.lambda},
            {"tau", c.tau},
            {"zeta", c.zeta},
            {"delta_w", c.delta_w},
            {"max_outer_iter", c.max_outer_iter},
            {"max_line_search_halvings", c.max_line_search_halvings},
            {"cg_tol", c.cg_tol},
            {"cg_max_iter", c.cg_max_iter},
            {"irls_inner_max_iter", c.irls_inner_max_iter},
            {"irls_inner_tol", c.irls_inner_tol},
            {"epsilon0", c.epsilon0},
            {"epsilon_decay", c.epsilon_decay},
            {"fixed_unit_weights", c.fixed_unit_weights}};
  j["pixel_drop_threshold"] =
      c.pixel_drop_threshold ? json(*c.pixel_drop_threshold) : json(nullptr);
  return j;
}

SplitSpec split_from_json(const json& j, SplitSpec s) {
  reject_unknown(j, {"train_per_class", "test_per_class", "impostor_classes"},
                 "split");
  take(j, "train_per_class", s.train_per_class);
  take(j, "test_per_class", s.test_per_class);
  if (j.contains("impostor_classes")) {
    s.impostor_classes.clear();
    for (const auto& v : j.at("impostor_classes")) {
      s.impostor_classes.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    }
  }
  return s;
}

json to_json(const SplitSpec& s) {
  return {{"train_per_class", s.train_per_class},
          {"test_per_class", s.test_per_class},
          {"impostor_classes", s.impostor_classes}};
}

ExperimentConfig experiment_from_json(const json& j, ExperimentConfig e) {
  reject_unknown(j,
                 {"experiment_id", "dataset", "split", "resize", "coder",
                  "corruption_levels", "occlusion_levels", "patch", "pca_dim",
                  "seed", "output_dir", "rrc_l1", "rrc_l2", "ridge", "nn",
                  "threads", "timing"},
                 "experiment");
  take(j, "experiment_id", e.experiment_id);
  if (j.contains("dataset")) e.dataset = j.at("dataset").get<std::string>();
  if (j.contains("split")) e.split = split_from_json(j.at("split"), e.split);
  if (j.contains("resize")) {
    const auto& r = j.at("resize");
    if (r.is_null()) {
      e.resize.reset();
    } else {
      if (!r.is_array() || r.size() != 2) {
        throw std::invalid_argument("experiment: resize must be [width, height]");
      }
      e.resize = std::make_pair(r[0].get<int>(), r[1].get<int>());
    }
  }
  if (j.contains("coder")) e.coder = coder_from_json(j.at("coder"), e.coder);
  take(j, "corruption_levels", e.corruption_levels);
  take(j, "occlusion_levels", e.occlusion_levels);
  if (j.contains("patch")) {
    if (j.at("patch").is_null()) {
      e.patch.reset();
    } else {
      e.patch = j.at("patch").get<std::string>();
    }
  }
  if (j.contains("pca_dim")) {
    if (j.at("pca_dim").is_null()) {
      e.pca_dim.reset();
    } else {
      e.pca_dim = j.at("pca_dim").get<int>();
    }
  }
  if (j.contains("seed")) {
    if (j.at("seed").is_null()) {
      e.seed.reset();
    } else {
      e.seed = j.at("seed").get<std::uint64_t>();
    }
  }
  if (j.contains("output_dir")) e.output_dir = j.at("output_dir").get<std::string>();
  take(j, "rrc_l1", e.rrc_l1);
  take(j, "rrc_l2", e.rrc_l2);
  take(j, "ridge", e.ridge);
  take(j, "nn", e.nn);
  take(j, "threads", e.threads);
  take(j, "timing", e.timing);
  return e;
}

json to_json(const ExperimentConfig& e) {
  json j = {{"experiment_id", e.experiment_id},
            {"dataset", e.dataset.string()},
            {"split", to_json(e.split)},
            {"coder", to_json(e.coder)},
            {"corruption_levels", e.corruption_levels},
            {"occlusion_levels", e.occlusion_levels},
            {"output_dir", e.output_dir.string()},
            {"rrc_l1", e.rrc_l1},
            {"rrc_l2", e.rrc_l2},
            {"ridge", e.ridge},
            {"nn", e.nn},
            {"threads", e.threads},
            {"timing", e.timing}};
  j["resize"] = e.resize ? json::array({e.resize->first, e.resize->second})
                         : json(nullptr);
  j["patch"] = e.patch ? json(e.patch->string()) : json(nullptr);
  j["pca_dim"] = e.pca_dim ? json(*e.pca_dim) : json(nullptr);
  j["seed"] = e.seed ? json(*e.seed) : json(nullptr);
  return j;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

json to_json(const CodingResult& r) {
  json trace = json::array();
  for (const auto& rec : r.trace) {
    trace.push_back({{"objective", number_or_null(rec.objective)},
                     {"objective_before", number_or_null(rec.objective_before)},
                     {"step", rec.step},
                     {"weight_change", number_or_null(rec.weight_change)},
                     {"dropped_pixels", rec.dropped_pixels},
                     {"solver_iterations", rec.solver_iterations}});
  }
  json objectives = json::array();
  for (double v : r.objective_trace) objectives.push_back(number_or_null(v));
  return {{"predicted_class", r.predicted_class},
          {"sci", r.sci},
          {"iterations", r.iterations},
          {"stop_reason", to_string(r.stop_reason)},
          {"solver_converged", r.solver_converged},
          {"degenerate_weights", r.degenerate_weights},
          {"per_class_residuals", r.per_class_residuals},
          {"objective_trace", objectives},
          {"weight_params",
           {{"mu", r.final_weights.params.mu},
            {"delta", r.final_weights.params.delta}}},
          {"alpha", vec_json(r.alpha)},
          {"weights", vec_json(r.final_weights.weights)},
          {"residual", vec_json(r.residual)},
          {"trace", trace}};
}

}  // namespace rrc::harness
