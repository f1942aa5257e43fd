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

#include "rrc/harness/dataset.hpp"

namespace rrc::harness {

/// Parameters of the synthetic face-like dataset.
///
/// Every class has a smooth albedo map (a shared template plus class-specific
/// blobs). Each sample multiplies the albedo by a random illumination field
/// 1 + a*u + b*v + c*u*v, adds a localized "expression" blob and pixel noise. The
/// images of one class therefore lie close to a 4-dimensional linear
/// subspace, while illumination moves samples far apart in Euclidean
/// distance.
struct SynthSpec {
  int classes = 10;
  int impostor_classes = 0;
  int train_per_class = 8;
  int test_per_class = 10;
  int width = 24;
  int height = 21;
  double noise_sigma = 2.0;
  double class_contrast = 0.3;   ///< peak amplitude of class-specific blobs
  double expression = 0.4;       ///< peak amplitude of the per-sample blob
  double expression_size = 0.2;  ///< upper bound of its spread
  std::uint64_t seed = 1;
};

/// In-memory dataset. Impostor classes are generated after the dictionary
/// classes and contribute test_per_class images each.
DatasetSplit generate_synthetic(const SynthSpec& spec);

/// Writes PGM files and a manifest.json (with its split) under `dir`, and the
/// default occluder as occluder.pgm. Returns the manifest path.
std::filesystem::path write_synthetic(const SynthSpec& spec,
                                      const std::filesystem::path& dir);

}  // namespace rrc::harness
