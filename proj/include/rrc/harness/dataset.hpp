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
#include <optional>
#include <string>
#include <vector>

#include "rrc/harness/image.hpp"
#include "rrc/types.hpp"

namespace rrc::harness {

/// Dataset manifest: class id -> image files.
///
/// JSON form: either {"classes": {"<id>": ["a.pgm", ...], ...}, "split": ...}
/// or a bare {"<id>": [...]} object. Relative paths resolve against the
/// manifest's directory. Class ids sort numerically when all are integers,
/// lexicographically otherwise; file lists are sorted.
struct Manifest {
  std::vector<std::string> class_ids;
  std::vector<std::vector<std::filesystem::path>> files;
  /// Split stored alongside the classes, if any.
  std::optional<std::string> split_json;
};

Manifest load_manifest(const std::filesystem::path& path);

/// How manifest files become dictionary atoms, test queries and impostors.
/// Per class, the first `train_per_class` sorted files train and the next
/// `test_per_class` files test (0 = all remaining). Classes listed in
/// `impostor_classes` never enter the dictionary; all their files are
/// impostor queries.
struct SplitSpec {
  int train_per_class = 0;
  int test_per_class = 0;
  std::vector<std::string> impostor_classes;
};

struct LabeledImages {
  std::vector<GrayImage> images;
  std::vector<int> labels;
  std::vector<std::string> names;  ///< source path or synthetic id
};

struct DatasetSplit {
  LabeledImages train;
  LabeledImages test;
  LabeledImages impostors;  ///< labels are -1
  std::vector<std::string> class_ids;  ///< dictionary classes, label order
  int width = 0;
  int height = 0;
};

/// Reads every image named by the manifest. All images must share one size
/// unless `resize` is given, in which case each is resampled to it.
DatasetSplit load_dataset(const Manifest& manifest, const SplitSpec& split,
                          std::optional<std::pair<int, int>> resize = {});

/// Column-stacks the images (row-major flattening) into a Dictionary;
/// normalization failures name the offending image.
Dictionary make_dictionary(const LabeledImages& train);

}  // namespace rrc::harness
