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

#include <filesystem>

#include "json.hpp"
#include "rrc/harness/dataset.hpp"
#include "rrc/harness/experiment.hpp"
#include "rrc/types.hpp"

namespace rrc::harness {

/// JSON <-> configuration. Readers start from the defaults, override the keys
/// that are present and reject unknown keys (std::invalid_argument).
/// CoderConfig keys match the field names, e.g.
///   {"beta": 1, "lambda": 0.001, "tau": 0.6, "pixel_drop_threshold": 0.05}
CoderConfig coder_from_json(const nlohmann::json& j, CoderConfig base = {});
nlohmann::json to_json(const CoderConfig& config);

SplitSpec split_from_json(const nlohmann::json& j, SplitSpec base = {});
nlohmann::json to_json(const SplitSpec& split);

/// Keys: experiment_id, dataset, split, resize ([w, h]), coder,
/// corruption_levels, occlusion_levels, patch, pca_dim, seed, output_dir,
/// rrc_l1, rrc_l2, ridge, nn, threads, timing.
ExperimentConfig experiment_from_json(const nlohmann::json& j,
                                      ExperimentConfig base = {});
nlohmann::json to_json(const ExperimentConfig& config);

/// Reads a JSON file; errors name the path.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Coefficients, weights, residuals, class decision and the iteration trace.
nlohmann::json to_json(const CodingResult& result);

}  // namespace rrc::harness
