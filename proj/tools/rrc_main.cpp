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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrc/classify.hpp"
#include "rrc/harness/config_io.hpp"
#include "rrc/harness/dataset.hpp"
#include "rrc/harness/experiment.hpp"
#include "rrc/harness/synth.hpp"
#include "rrc/ir3c.hpp"

namespace {

using namespace rrc;
using namespace rrc::harness;

// Flags shared by the subcommands that run an experiment. Values are applied
// on top of the --config file only when given on the command line.
struct CommonFlags {
  std::string config_file;
  std::string experiment_id;
  std::string dataset;
  int train_per_class = 0;
  int test_per_class = 0;
  std::vector<std::string> impostors;
  std::vector<int> resize;
  int beta = 2;
  double lambda = 0.0, tau = 0.0, zeta = 0.0, delta_w = 0.0;
  int max_outer_iter = 0, irls_inner_max_iter = 0;
  double irls_inner_tol = 0.0, pixel_drop = 0.0;
  std::vector<double> levels;
  std::string patch;
  int pca_dim = 0;
  std::uint64_t seed = 0;
  std::string output_dir;
  std::vector<std::string> methods;
  int threads = 1;
  bool timing = false;

  std::vector<std::pair<std::string, CLI::Option*>> opts;

  void add(CLI::App* app, bool with_levels, bool with_beta) {
    auto reg = [&](const std::string& key, CLI::Option* o) { opts.emplace_back(key, o); };
    reg("config", app->add_option("--config", config_file, "JSON config file")
                      ->check(CLI::ExistingFile));
    reg("experiment_id", app->add_option("--experiment-id", experiment_id,
                                         "Value of the experiment CSV column"));
    reg("dataset", app->add_option("--dataset", dataset, "Dataset manifest.json"));
    reg("train", app->add_option("--train-per-class", train_per_class,
                                 "Training images per class (0 = all)"));
    reg("test", app->add_option("--test-per-class", test_per_class,
                                "Test images per class (0 = rest)"));
    reg("impostors", app->add_option("--impostor-classes", impostors,
                                     "Class ids held out as impostors")
                         ->delimiter(','));
    reg("resize", app->add_option("--resize", resize, "Resample images to W,H")
                      ->delimiter(',')
                      ->expected(2));
    if (with_beta) {
      reg("beta", app->add_option("--beta", beta, "1 = RRC_L1, 2 = RRC_L2")
                      ->check(CLI::IsMember({1, 2})));
    }
    reg("lambda", app->add_option("--lambda", lambda, "Coefficient regularization"));
    reg("tau", app->add_option("--tau", tau, "Residual quantile for delta"));
    reg("zeta", app->add_option("--zeta", zeta, "mu * delta"));
    reg("delta_w", app->add_option("--delta-w", delta_w, "Weight-change stop tolerance"));
    reg("max_outer_iter", app->add_option("--max-outer-iter", max_outer_iter,
                                          "Outer iteration cap"));
    reg("irls_inner_max_iter",
        app->add_option("--irls-inner-max-iter", irls_inner_max_iter,
                        "l1 reweighting rounds per coding step"));
    reg("irls_inner_tol", app->add_option("--irls-inner-tol", irls_inner_tol,
                                          "l1 inner tolerance"));
    reg("pixel_drop", app->add_option("--pixel-drop-threshold", pixel_drop,
                                      "Exclude pixels with weight below this"));
    reg("pca_dim", app->add_option("--pca-dim", pca_dim, "Eigenface dimension"));
    reg("methods", app->add_option("--methods", methods,
                                   "Subset of RRC_L1,RRC_L2,RIDGE,NN")
                       ->delimiter(','));
    reg("threads", app->add_option("--threads", threads, "Worker threads")
                       ->check(CLI::PositiveNumber));
    reg("output_dir", app->add_option("--output-dir", output_dir, "Output directory"));
    reg("seed", app->add_option("--seed", seed, "RNG seed"));
    reg("timing", app->add_flag("--timing", timing,
                                "Fill mean_ms (makes CSVs run-dependent)"));
    if (with_levels) {
      reg("levels", app->add_option("--levels", levels, "Perturbation fractions")
                        ->delimiter(','));
      reg("patch", app->add_option("--patch", patch, "Occluder image (PGM or PNG)")
                       ->check(CLI::ExistingFile));
    }
  }

  bool given(const std::string& key) const {
    for (const auto& [k, o] : opts) {
      if (k == key) return o->count() > 0;
    }
    return false;
  }

  ExperimentConfig build(Perturbation kind) const {
    ExperimentConfig e;
    if (!config_file.empty()) e = experiment_from_json(read_json_file(config_file));
    if (given("experiment_id")) e.experiment_id = experiment_id;
    if (given("dataset")) e.dataset = dataset;
    if (given("train")) e.split.train_per_class = train_per_class;
    if (given("test")) e.split.test_per_class = test_per_class;
    if (given("impostors")) e.split.impostor_classes = impostors;
    if (given("resize")) e.resize = std::make_pair(resize[0], resize[1]);
    if (given("beta")) e.coder.beta = beta;
    if (given("lambda")) e.coder.lambda = lambda;
    if (given("tau")) e.coder.tau = tau;
    if (given("zeta")) e.coder.zeta = zeta;
    if (given("delta_w")) e.coder.delta_w = delta_w;
    if (given("max_outer_iter")) e.coder.max_outer_iter = max_outer_iter;
    if (given("irls_inner_max_iter")) e.coder.irls_inner_max_iter = irls_inner_max_iter;
    if (given("irls_inner_tol")) e.coder.irls_inner_tol = irls_inner_tol;
    if (given("pixel_drop")) e.coder.pixel_drop_threshold = pixel_drop;
    if (given("pca_dim")) e.pca_dim = pca_dim;
    if (given("threads")) e.threads = threads;
    if (given("output_dir")) e.output_dir = output_dir;
    if (given("seed")) e.seed = seed;
    if (given("timing")) e.timing = timing;
    if (given("patch")) e.patch = patch;
    if (given("levels")) {
      if (kind == Perturbation::kOcclusion) e.occlusion_levels = levels;
      if (kind == Perturbation::kCorruption) e.corruption_levels = levels;
    }
    if (given("methods")) {
      e.rrc_l1 = e.rrc_l2 = e.ridge = e.nn = false;
      for (const auto& m : methods) {
        if (m == "RRC_L1") e.rrc_l1 = true;
        else if (m == "RRC_L2") e.rrc_l2 = true;
        else if (m == "RIDGE") e.ridge = true;
        else if (m == "NN") e.nn = true;
        else throw std::invalid_argument("unknown method '" + m + "'");
      }
    }
    if (e.dataset.empty()) throw std::invalid_argument("--dataset is required");
    return e;
  }
};

void print_rows(const ExperimentOutput& out) {
  for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& r : out.rows) {
    std::printf("%-8s %-10s level %-5.3g rate %.4f  iters %.2f  (%zu queries, %zu failed)\n",
                r.method.c_str(), r.perturbation.c_str(), r.level, r.rate,
                r.mean_iters, r.counted, r.failures);
  }
  for (const auto& c : out.roc) std::printf("%-8s AUC %.4f\n", c.method.c_str(), c.auc);
}

int run_bench(const CommonFlags& flags, Perturbation kind, const char* name,
              bool validation) {
  ExperimentConfig e = flags.build(kind);
  if (e.experiment_id.empty()) e.experiment_id = name;
  if (!e.seed) throw std::invalid_argument("--seed is required for " + std::string(name));
  for (const auto& w : e.coder.validate()) std::cerr << "warning: " << w << "\n";
  const DatasetSplit data = load_experiment_data(e);
  ExperimentOutput out;
  if (validation) {
    out = run_validation(data, e);
  } else {
    const std::vector<double> levels =
        kind == Perturbation::kCorruption  ? e.corruption_levels
        : kind == Perturbation::kOcclusion ? e.occlusion_levels
                                           : std::vector<double>{0.0};
    out = run_benchmark(data, e, kind, levels);
  }
  write_outputs(out, e);
  print_rows(out);
  return 0;
}

int run_code(const CommonFlags& flags, const std::string& query_path,
             const std::string& output) {
  ExperimentConfig e = flags.build(Perturbation::kNone);
  for (const auto& w : e.coder.validate()) std::cerr << "warning: " << w << "\n";
  SplitSpec split = e.split;
  const Manifest manifest = load_manifest(e.dataset);
  if (split.train_per_class == 0 && split.test_per_class == 0 && manifest.split_json) {
    split = split_from_json(nlohmann::json::parse(*manifest.split_json));
  }
  const DatasetSplit data = load_dataset(manifest, split, e.resize);
  const Dictionary dict = make_dictionary(data.train);
  GrayImage img = read_image(query_path);
  if (img.width != data.width || img.height != data.height) {
    img = resize_bilinear(img, data.width, data.height);
  }
  const QuerySignal y(to_vector(img));
  CodingResult result;
  if (e.pca_dim) {
    const PcaModel pca = fit_pca(dict.atoms(), *e.pca_dim);
    result = run_ir3c_pca(dict, y, pca, e.coder);
  } else {
    result = run_ir3c(dict, y, e.coder);
  }
  nlohmann::json j = to_json(result);
  j["predicted_class_id"] = data.class_ids[static_cast<size_t>(result.predicted_class)];
  j["query"] = query_path;
  j["config"] = to_json(e.coder);
  if (output.empty() || output == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error(output + ": cannot write");
    out << j.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized robust coding for face recognition"};
  app.require_subcommand(1);

  CommonFlags code_flags, rec_flags, corrupt_flags, occlude_flags, roc_flags;
  std::string query_path, code_output;
  auto* code = app.add_subcommand("code", "Code one query image, print JSON");
  code_flags.add(code, false, true);
  code->add_option("--query", query_path, "Query image")->required()->check(CLI::ExistingFile);
  code->add_option("--output", code_output, "JSON output file (default stdout)");

  auto* recognize = app.add_subcommand("recognize", "Recognition on unperturbed test images");
  rec_flags.add(recognize, false, false);
  auto* corrupt = app.add_subcommand("corrupt-bench", "Random pixel corruption benchmark");
  corrupt_flags.add(corrupt, true, false);
  auto* occlude = app.add_subcommand("occlude-bench", "Random block occlusion benchmark");
  occlude_flags.add(occlude, true, false);
  auto* roc = app.add_subcommand("validate-roc", "SCI validation ROC with impostors");
  roc_flags.add(roc, false, false);

  SynthSpec synth;
  std::string synth_dir;
  auto* gen = app.add_subcommand("synth-gen", "Write the synthetic face-like dataset");
  gen->add_option("--output-dir", synth_dir, "Destination directory")->required();
  gen->add_option("--classes", synth.classes, "Dictionary classes");
  gen->add_option("--impostor-classes", synth.impostor_classes, "Extra impostor classes");
  gen->add_option("--train-per-class", synth.train_per_class, "Training samples per class");
  gen->add_option("--test-per-class", synth.test_per_class, "Test samples per class");
  gen->add_option("--width", synth.width, "Image width");
  gen->add_option("--height", synth.height, "Image height");
  gen->add_option("--noise", synth.noise_sigma, "Pixel noise sigma");
  gen->add_option("--contrast", synth.class_contrast, "Class blob amplitude");
  gen->add_option("--expression", synth.expression, "Per-sample blob amplitude");
  gen->add_option("--expression-size", synth.expression_size, "Per-sample blob spread");
  gen->add_option("--seed", synth.seed, "RNG seed")->required();

  CLI11_PARSE(app, argc, argv);
  try {
    if (code->parsed()) return run_code(code_flags, query_path, code_output);
    if (recognize->parsed()) return run_bench(rec_flags, Perturbation::kNone, "recognize", false);
    if (corrupt->parsed()) {
      return run_bench(corrupt_flags, Perturbation::kCorruption, "corrupt-bench", false);
    }
    if (occlude->parsed()) {
      return run_bench(occlude_flags, Perturbation::kOcclusion, "occlude-bench", false);
    }
    if (roc->parsed()) return run_bench(roc_flags, Perturbation::kNone, "validate-roc", true);
    if (gen->parsed()) {
      const auto path = write_synthetic(synth, synth_dir);
      std::cout << path.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
