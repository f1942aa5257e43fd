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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rrc/harness/dataset.hpp"
#include "rrc/types.hpp"

namespace rrc::harness {

enum class Method { kRrcL1, kRrcL2, kRidge, kNn };
const char* to_string(Method method);

enum class Perturbation { kNone, kCorruption, kOcclusion };
const char* to_string(Perturbation kind);

struct ExperimentConfig {
  std::string experiment_id;
  std::filesystem::path dataset;  ///< manifest.json
  SplitSpec split;
  std::optional<std::pair<int, int>> resize;  ///< (width, height)
  CoderConfig coder;  ///< beta is set per method
  std::vector<double> corruption_levels{0.0, 0.2, 0.4, 0.6};
  std::vector<double> occlusion_levels{0.0, 0.1, 0.2, 0.3};
  std::optional<std::filesystem::path> patch;  ///< built-in texture if unset
  std::optional<int> pca_dim;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = ".";
  bool rrc_l1 = true;
  bool rrc_l2 = true;
  bool ridge = true;
  bool nn = true;
  int threads = 1;
  bool timing = false;  ///< wall times make the CSV non-reproducible

  /// Throws std::invalid_argument for fractions outside [0,1] (occlusion:
  /// [0,1)), no methods, or a missing seed when `need_seed`.
  void validate(bool need_seed) const;
  std::vector<Method> methods() const;
};

struct MetricsRow {
  std::string experiment;
  std::string method;
  std::string perturbation;
  double level = 0.0;
  double rate = 0.0;
  double mean_iters = 0.0;
  double mean_ms = 0.0;
  std::size_t counted = 0;
  std::size_t failures = 0;
};

struct QueryRecord {
  std::string method;
  std::string perturbation;
  double level = 0.0;
  std::size_t query = 0;
  std::string name;
  int true_class = 0;  ///< -1 for impostors
  int predicted_class = -1;
  double sci = 0.0;
  int iterations = 0;
  double objective = 0.0;  ///< NaN when the method has no objective
  double ms = 0.0;
  bool failed = false;
  std::string error;
};

struct RocPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

struct RocCurve {
  std::string method;
  std::vector<RocPoint> points;
  double auc = 0.0;
};

struct ExperimentOutput {
  std::vector<MetricsRow> rows;
  std::vector<QueryRecord> queries;  ///< sorted by (level, query, method)
  std::vector<RocCurve> roc;         ///< validation only
  std::vector<std::string> warnings;
};

/// Loads the manifest named by config.dataset. The split stored in the
/// manifest is used when config.split is left at its defaults.
DatasetSplit load_experiment_data(const ExperimentConfig& config);

/// For every level and test query: perturb (seeded per level and query),
/// code with each method, aggregate recognition rates.
ExperimentOutput run_benchmark(const DatasetSplit& data,
                               const ExperimentConfig& config,
                               Perturbation kind,
                               const std::vector<double>& levels);

/// Customer (test) and impostor queries scored by SCI; one ROC per method
/// with an SCI (NN has no coefficients and is skipped).
ExperimentOutput run_validation(const DatasetSplit& data,
                                const ExperimentConfig& config);

/// Thresholds 0, 0.01, ..., 1. A query is accepted when sci >= threshold.
std::vector<double> default_thresholds();
std::vector<RocPoint> roc_sweep(const std::vector<double>& customer,
                                const std::vector<double>& impostor,
                                const std::vector<double>& thresholds);
/// Probability that a random customer outscores a random impostor, ties
/// counting one half.
double roc_auc(const std::vector<double>& customer,
               const std::vector<double>& impostor);

void write_metrics_csv(const std::vector<MetricsRow>& rows, bool timing,
                       const std::filesystem::path& path);
void write_queries_csv(const std::string& experiment,
                       const std::vector<QueryRecord>& queries, bool timing,
                       const std::filesystem::path& path);
void write_roc_csv(const std::vector<RocPoint>& points,
                   const std::filesystem::path& path);
/// method,auc
void write_auc_csv(const std::vector<RocCurve>& curves,
                   const std::filesystem::path& path);

/// Writes metrics.csv, queries.csv and, for validation, roc_<METHOD>.csv and
/// auc.csv under config.output_dir.
void write_outputs(const ExperimentOutput& output,
                   const ExperimentConfig& config);

}  // namespace rrc::harness
