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

#include "rrc/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rrc/classify.hpp"
#include "rrc/harness/baselines.hpp"
#include "rrc/harness/config_io.hpp"
#include "rrc/harness/perturb.hpp"
#include "rrc/harness/rng.hpp"
#include "rrc/ir3c.hpp"

namespace rrc::harness {

const char* to_string(Method method) {
  switch (method) {
    case Method::kRrcL1: return "RRC_L1";
    case Method::kRrcL2: return "RRC_L2";
    case Method::kRidge: return "RIDGE";
    case Method::kNn: return "NN";
  }
  return "?";
}

const char* to_string(Perturbation kind) {
  switch (kind) {
    case Perturbation::kNone: return "none";
    case Perturbation::kCorruption: return "corruption";
    case Perturbation::kOcclusion: return "occlusion";
  }
  return "?";
}

void ExperimentConfig::validate(bool need_seed) const {
  for (double f : corruption_levels) {
    if (!(f >= 0.0 && f <= 1.0)) {
      throw std::invalid_argument("corruption level outside [0,1]: " +
                                  std::to_string(f));
    }
  }
  for (double f : occlusion_levels) {
    if (!(f >= 0.0 && f < 1.0)) {
      throw std::invalid_argument("occlusion level outside [0,1): " +
                                  std::to_string(f));
    }
  }
  if (methods().empty()) throw std::invalid_argument("no methods enabled");
  if (need_seed && !seed) throw std::invalid_argument("a seed is required");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (pca_dim && *pca_dim < 1) throw std::invalid_argument("pca_dim must be >= 1");
  coder.validate();
}

std::vector<Method> ExperimentConfig::methods() const {
  std::vector<Method> out;
  if (rrc_l1) out.push_back(Method::kRrcL1);
  if (rrc_l2) out.push_back(Method::kRrcL2);
  if (ridge) out.push_back(Method::kRidge);
  if (nn) out.push_back(Method::kNn);
  return out;
}

DatasetSplit load_experiment_data(const ExperimentConfig& config) {
  const Manifest manifest = load_manifest(config.dataset);
  SplitSpec split = config.split;
  const bool default_split = split.train_per_class == 0 &&
                             split.test_per_class == 0 &&
                             split.impostor_classes.empty();
  if (default_split && manifest.split_json) {
    split = split_from_json(nlohmann::json::parse(*manifest.split_json));
  }
  return load_dataset(manifest, split, config.resize);
}

namespace {

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const auto count = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  for (std::size_t t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

struct Coders {
  const Dictionary& dict;
  const ExperimentConfig& config;
  std::optional<PcaModel> pca;
  Eigen::MatrixXd projected_atoms;

  Coders(const Dictionary& d, const ExperimentConfig& c) : dict(d), config(c) {
    if (c.pca_dim) {
      pca = fit_pca(d.atoms(), *c.pca_dim);
      projected_atoms = pca->basis() * d.atoms();
    }
  }

  void run(Method method, const QuerySignal& y, QueryRecord& rec) const {
    const auto start = std::chrono::steady_clock::now();
    rec.objective = std::numeric_limits<double>::quiet_NaN();
    switch (method) {
      case Method::kRrcL1:
      case Method::kRrcL2: {
        CoderConfig cfg = config.coder;
        cfg.beta = method == Method::kRrcL1 ? 1 : 2;
        const CodingResult r = pca ? run_ir3c_pca(dict, y, *pca, cfg)
                                   : run_ir3c(dict, y, cfg);
        rec.predicted_class = r.predicted_class;
        rec.sci = r.sci;
        rec.iterations = r.iterations;
        if (!r.objective_trace.empty()) rec.objective = r.objective_trace.back();
        break;
      }
      case Method::kRidge: {
        BaselineResult r;
        if (pca) {
          CgOptions cg;
          cg.tol = config.coder.cg_tol;
          cg.max_iter = config.coder.effective_cg_max_iter(dict.size());
          r = baseline_ridge(projected_atoms, pca->basis() * y.values(),
                             config.coder.lambda, dict.partition(), cg);
        } else {
          r = baseline_ridge(dict, y, config.coder);
        }
        rec.predicted_class = r.predicted_class;
        rec.sci = r.sci;
        rec.iterations = 1;
        break;
      }
      case Method::kNn: {
        const BaselineResult r =
            pca ? baseline_nn(projected_atoms, pca->basis() * y.values(),
                              dict.partition())
                : baseline_nn(dict.atoms(), y.values(), dict.partition());
        rec.predicted_class = r.predicted_class;
        rec.sci = 0.0;
        rec.iterations = 0;
        break;
      }
    }
    rec.ms = std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - start)
                 .count();
  }
};

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return s;
}

// Runs every method on one (possibly perturbed) image, filling `out`.
void code_image(const Coders& coders, const std::vector<Method>& methods,
                const GrayImage& img, QueryRecord proto, QueryRecord* out) {
  std::optional<QuerySignal> y;
  std::string load_error;
  try {
    y.emplace(to_vector(img));
  } catch (const std::exception& e) {
    load_error = e.what();
  }
  for (std::size_t k = 0; k < methods.size(); ++k) {
    QueryRecord rec = proto;
    rec.method = to_string(methods[k]);
    if (!y) {
      rec.failed = true;
      rec.error = load_error;
    } else {
      try {
        coders.run(methods[k], *y, rec);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.error = e.what();
      }
    }
    out[k] = std::move(rec);
  }
}

void collect_failures(ExperimentOutput& out) {
  for (const auto& q : out.queries) {
    if (!q.failed) continue;
    std::ostringstream ss;
    ss << q.method << " " << q.perturbation << " level " << q.level
       << " query " << q.query << " (" << q.name << ") excluded: " << q.error;
    out.warnings.push_back(ss.str());
  }
}

void aggregate(ExperimentOutput& out, const ExperimentConfig& config,
               const std::vector<Method>& methods, const std::string& kind,
               const std::vector<double>& levels, std::size_t per_level,
               bool customers_only) {
  const std::size_t nm = methods.size();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    for (std::size_t k = 0; k < nm; ++k) {
      MetricsRow row;
      row.experiment = config.experiment_id;
      row.method = to_string(methods[k]);
      row.perturbation = kind;
      row.level = levels[li];
      std::size_t correct = 0;
      double iters = 0.0;
      double ms = 0.0;
      for (std::size_t q = 0; q < per_level; ++q) {
        const QueryRecord& rec = out.queries[(li * per_level + q) * nm + k];
        if (customers_only && rec.true_class < 0) continue;
        if (rec.failed) {
          ++row.failures;
          continue;
        }
        ++row.counted;
        if (rec.predicted_class == rec.true_class) ++correct;
        iters += rec.iterations;
        ms += rec.ms;
      }
      if (row.counted > 0) {
        const double n = static_cast<double>(row.counted);
        row.rate = static_cast<double>(correct) / n;
        row.mean_iters = iters / n;
        row.mean_ms = ms / n;
      } else {
        out.warnings.push_back(row.method + " level " + std::to_string(row.level) +
                               ": every query failed");
      }
      out.rows.push_back(row);
    }
  }
}

QueryRecord prototype(const LabeledImages& set, std::size_t i,
                      const std::string& kind, double level, std::size_t id) {
  QueryRecord rec;
  rec.perturbation = kind;
  rec.level = level;
  rec.query = id;
  rec.name = set.names[i];
  rec.true_class = set.labels[i];
  return rec;
}

}  // namespace

ExperimentOutput run_benchmark(const DatasetSplit& data,
                               const ExperimentConfig& config,
                               Perturbation kind,
                               const std::vector<double>& levels) {
  config.validate(kind != Perturbation::kNone);
  const Dictionary dict = make_dictionary(data.train);
  const Coders coders(dict, config);
  const std::vector<Method> methods = config.methods();
  const std::size_t nm = methods.size();
  const std::size_t nq = data.test.images.size();
  const std::string kind_name = to_string(kind);
  const std::uint64_t seed = config.seed.value_or(0);

  GrayImage patch;
  if (kind == Perturbation::kOcclusion) {
    patch = config.patch ? read_image(*config.patch)
                         : default_patch(std::max(data.width, data.height));
  }

  ExperimentOutput out;
  out.queries.resize(levels.size() * nq * nm);
  parallel_for(levels.size() * nq, config.threads, [&](std::size_t item) {
    const std::size_t li = item / nq;
    const std::size_t qi = item % nq;
    const GrayImage& clean = data.test.images[qi];
    GrayImage img;
    if (kind == Perturbation::kCorruption) {
      Rng rng = Rng::stream(seed, {kStreamCorruption, li, qi});
      img = corrupt_pixels(clean, levels[li], rng).image;
    } else if (kind == Perturbation::kOcclusion) {
      Rng rng = Rng::stream(seed, {kStreamOcclusion, li, qi});
      img = occlude_block(clean, levels[li], patch, rng).image;
    } else {
      img = clean;
    }
    code_image(coders, methods, img,
               prototype(data.test, qi, kind_name, levels[li], qi),
               &out.queries[item * nm]);
  });
  collect_failures(out);
  aggregate(out, config, methods, kind_name, levels, nq, false);
  return out;
}

ExperimentOutput run_validation(const DatasetSplit& data,
                                const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.nn = false;
  cfg.validate(false);
  if (data.impostors.images.empty()) {
    throw std::invalid_argument("validation needs impostor queries");
  }
  const Dictionary dict = make_dictionary(data.train);
  const Coders coders(dict, cfg);
  const std::vector<Method> methods = cfg.methods();
  const std::size_t nm = methods.size();
  const std::size_t nc = data.test.images.size();
  const std::size_t nq = nc + data.impostors.images.size();

  ExperimentOutput out;
  out.queries.resize(nq * nm);
  parallel_for(nq, cfg.threads, [&](std::size_t qi) {
    const bool customer = qi < nc;
    const LabeledImages& set = customer ? data.test : data.impostors;
    const std::size_t local = customer ? qi : qi - nc;
    code_image(coders, methods, set.images[local],
               prototype(set, local, "none", 0.0, qi), &out.queries[qi * nm]);
  });
  collect_failures(out);
  aggregate(out, cfg, methods, "none", {0.0}, nq, true);

  const std::vector<double> thresholds = default_thresholds();
  for (std::size_t k = 0; k < nm; ++k) {
    std::vector<double> cust, imp;
    for (std::size_t qi = 0; qi < nq; ++qi) {
      const QueryRecord& rec = out.queries[qi * nm + k];
      if (rec.failed) continue;
      (rec.true_class >= 0 ? cust : imp).push_back(rec.sci);
    }
    RocCurve curve;
    curve.method = to_string(methods[k]);
    curve.points = roc_sweep(cust, imp, thresholds);
    curve.auc = roc_auc(cust, imp);
    out.roc.push_back(std::move(curve));
  }
  return out;
}

std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 0; i <= 100; ++i) t.push_back(i / 100.0);
  return t;
}

std::vector<RocPoint> roc_sweep(const std::vector<double>& customer,
                                const std::vector<double>& impostor,
                                const std::vector<double>& thresholds) {
  auto accepted = [](const std::vector<double>& s, double t) {
    if (s.empty()) return 0.0;
    const auto n = std::count_if(s.begin(), s.end(), [t](double v) { return v >= t; });
    return static_cast<double>(n) / static_cast<double>(s.size());
  };
  std::vector<double> sorted = thresholds;
  std::sort(sorted.begin(), sorted.end());
  std::vector<RocPoint> out;
  for (double t : sorted) out.push_back({t, accepted(customer, t), accepted(impostor, t)});
  return out;
}

double roc_auc(const std::vector<double>& customer,
               const std::vector<double>& impostor) {
  if (customer.empty() || impostor.empty()) return 0.0;
  double wins = 0.0;
  for (double c : customer) {
    for (double i : impostor) wins += c > i ? 1.0 : (c == i ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(customer.size()) *
                 static_cast<double>(impostor.size()));
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  return out;
}

std::string fmt(const char* spec, double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

void write_metrics_csv(const std::vector<MetricsRow>& rows, bool timing,
                       const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "experiment,method,perturbation,level,rate,mean_iters,mean_ms\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.method << ',' << r.perturbation << ','
        << fmt("%.4g", r.level) << ',' << fmt("%.6f", r.rate) << ','
        << fmt("%.4f", r.mean_iters) << ','
        << (timing ? fmt("%.3f", r.mean_ms) : std::string()) << '\n';
  }
}

void write_queries_csv(const std::string& experiment,
                       const std::vector<QueryRecord>& queries, bool timing,
                       const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "experiment,method,perturbation,level,query,name,true_class,"
         "predicted_class,sci,iterations,objective,ms,status\n";
  for (const auto& q : queries) {
    out << experiment << ',' << q.method << ',' << q.perturbation << ','
        << fmt("%.4g", q.level) << ',' << q.query << ',' << one_line(q.name)
        << ',' << q.true_class << ',';
    if (q.failed) {
      out << ",,,,," << "error: " << one_line(q.error) << '\n';
      continue;
    }
    out << q.predicted_class << ',' << fmt("%.6f", q.sci) << ',' << q.iterations
        << ',' << fmt("%.10g", q.objective) << ','
        << (timing ? fmt("%.3f", q.ms) : std::string()) << ",ok\n";
  }
}

void write_roc_csv(const std::vector<RocPoint>& points,
                   const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "threshold,tpr,fpr\n";
  for (const auto& p : points) {
    out << fmt("%.2f", p.threshold) << ',' << fmt("%.6f", p.tpr) << ','
        << fmt("%.6f", p.fpr) << '\n';
  }
}

void write_auc_csv(const std::vector<RocCurve>& curves,
                   const std::filesystem::path& path) {
  auto out = open_csv(path);
  out << "method,auc\n";
  for (const auto& c : curves) out << c.method << ',' << fmt("%.6f", c.auc) << '\n';
}

void write_outputs(const ExperimentOutput& output,
                   const ExperimentConfig& config) {
  const auto& dir = config.output_dir;
  write_metrics_csv(output.rows, config.timing, dir / "metrics.csv");
  write_queries_csv(config.experiment_id, output.queries, config.timing,
                    dir / "queries.csv");
  for (const auto& c : output.roc) write_roc_csv(c.points, dir / ("roc_" + c.method + ".csv"));
  if (!output.roc.empty()) write_auc_csv(output.roc, dir / "auc.csv");
}

}  // namespace rrc::harness
