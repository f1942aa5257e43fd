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

#include "rrc/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "rrc/harness/perturb.hpp"
#include "rrc/harness/rng.hpp"

namespace rrc::harness {
namespace {

struct Blob {
  double cu, cv, su, sv, amp;
  double at(double u, double v) const {
    const double du = (u - cu) / su;
    const double dv = (v - cv) / sv;
    return amp * std::exp(-0.5 * (du * du + dv * dv));
  }
};

// Shared template: bright oval, dark eye sockets, a nose ridge, a mouth.
double template_face(double u, double v) {
  static const Blob parts[] = {
      {0.0, 0.0, 0.55, 0.75, 0.35},    {-0.35, -0.25, 0.12, 0.08, -0.25},
      {0.35, -0.25, 0.12, 0.08, -0.25}, {0.0, 0.05, 0.06, 0.2, 0.10},
      {0.0, 0.45, 0.22, 0.06, -0.15},
  };
  double f = 0.45;
  for (const auto& b : parts) f += b.at(u, v);
  return f;
}

Blob random_blob(Rng& rng, double amp_lo, double amp_hi, double size_hi) {
  Blob b;
  b.cu = rng.uniform(-0.8, 0.8);
  b.cv = rng.uniform(-0.8, 0.8);
  b.su = rng.uniform(0.12, size_hi);
  b.sv = rng.uniform(0.12, size_hi);
  const double mag = rng.uniform(amp_lo, amp_hi);
  b.amp = rng.uniform01() < 0.5 ? -mag : mag;
  return b;
}

constexpr double kIntensityScale = 95.0;
constexpr int kClassBlobs = 8;
constexpr std::uint64_t kPrototype = ~std::uint64_t{0};

class ClassModel {
 public:
  ClassModel(const SynthSpec& spec, int cls) : spec_(spec), cls_(cls) {
    Rng rng = Rng::stream(spec.seed, {kStreamSynthetic,
                                      static_cast<std::uint64_t>(cls), kPrototype});
    for (int i = 0; i < kClassBlobs; ++i) blobs_.push_back(random_blob(rng, 0.25 * spec.class_contrast, spec.class_contrast, 0.35));
  }

  GrayImage sample(int index) const {
    Rng rng = Rng::stream(spec_.seed, {kStreamSynthetic,
                                       static_cast<std::uint64_t>(cls_),
                                       static_cast<std::uint64_t>(index)});
    const double a = rng.uniform(-0.7, 0.7);
    const double b = rng.uniform(-0.7, 0.7);
    const double c = rng.uniform(-0.4, 0.4);
    const Blob expression = random_blob(rng, spec_.expression / 3.0, spec_.expression, spec_.expression_size);

    GrayImage img(spec_.width, spec_.height);
    for (int y = 0; y < spec_.height; ++y) {
      const double v = (2.0 * y + 1.0) / spec_.height - 1.0;
      for (int x = 0; x < spec_.width; ++x) {
        const double u = (2.0 * x + 1.0) / spec_.width - 1.0;
        double albedo = template_face(u, v) + expression.at(u, v);
        for (const auto& bl : blobs_) albedo += bl.at(u, v);
        albedo = std::clamp(albedo, 0.05, 1.0);
        const double light = std::max(1.0 + a * u + b * v + c * u * v, 0.08);
        const double value =
            kIntensityScale * albedo * light + spec_.noise_sigma * rng.normal();
        img.at(x, y) = static_cast<std::uint8_t>(
            std::clamp(std::lround(value), 0L, 255L));
      }
    }
    return img;
  }

 private:
  const SynthSpec& spec_;
  int cls_;
  std::vector<Blob> blobs_;
};

std::string sample_name(int cls, int index) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "c%03d_s%02d", cls, index);
  return buf;
}

void check(const SynthSpec& spec) {
  if (spec.classes < 1 || spec.impostor_classes < 0 || spec.train_per_class < 1 ||
      spec.test_per_class < 0 || spec.width < 2 || spec.height < 2 ||
      spec.noise_sigma < 0.0) {
    throw std::invalid_argument("SynthSpec: invalid parameters");
  }
}

}  // namespace

DatasetSplit generate_synthetic(const SynthSpec& spec) {
  check(spec);
  DatasetSplit out;
  out.width = spec.width;
  out.height = spec.height;
  for (int c = 0; c < spec.classes + spec.impostor_classes; ++c) {
    const ClassModel model(spec, c);
    const bool impostor = c >= spec.classes;
    if (!impostor) {
      out.class_ids.push_back(std::to_string(c));
      for (int i = 0; i < spec.train_per_class; ++i) {
        out.train.images.push_back(model.sample(i));
        out.train.labels.push_back(c);
        out.train.names.push_back(sample_name(c, i));
      }
    }
    LabeledImages& dst = impostor ? out.impostors : out.test;
    for (int i = 0; i < spec.test_per_class; ++i) {
      const int index = spec.train_per_class + i;
      dst.images.push_back(model.sample(index));
      dst.labels.push_back(impostor ? -1 : c);
      dst.names.push_back(sample_name(c, index));
    }
  }
  return out;
}

std::filesystem::path write_synthetic(const SynthSpec& spec,
                                      const std::filesystem::path& dir) {
  check(spec);
  std::filesystem::create_directories(dir);
  nlohmann::json classes = nlohmann::json::object();
  nlohmann::json impostors = nlohmann::json::array();
  for (int c = 0; c < spec.classes + spec.impostor_classes; ++c) {
    const ClassModel model(spec, c);
    nlohmann::json files = nlohmann::json::array();
    const bool impostor = c >= spec.classes;
    const int first = impostor ? spec.train_per_class : 0;
    for (int i = first; i < spec.train_per_class + spec.test_per_class; ++i) {
      const std::string file = sample_name(c, i) + ".pgm";
      write_pgm(model.sample(i), dir / file);
      files.push_back(file);
    }
    classes[std::to_string(c)] = files;
    if (impostor) impostors.push_back(std::to_string(c));
  }
  nlohmann::json doc;
  doc["classes"] = classes;
  doc["split"] = {{"train_per_class", spec.train_per_class},
                  {"test_per_class", spec.test_per_class},
                  {"impostor_classes", impostors}};
  const auto path = dir / "manifest.json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot write");
  out << doc.dump(2) << "\n";
  write_pgm(default_patch(std::max(spec.width, spec.height)), dir / "occluder.pgm");
  return path;
}

}  // namespace rrc::harness
