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

#include "rrc/harness/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rrc::harness {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool all_integers(const std::vector<std::string>& ids) {
  return std::all_of(ids.begin(), ids.end(), [](const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
}

}  // namespace

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open manifest");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw std::runtime_error(path.string() + ": manifest must be a JSON object");
  }
  const json& classes = doc.contains("classes") ? doc.at("classes") : doc;
  if (!classes.is_object() || classes.empty()) {
    throw std::runtime_error(path.string() + ": no classes in manifest");
  }

  Manifest m;
  for (const auto& [id, list] : classes.items()) {
    if (!list.is_array()) {
      throw std::runtime_error(path.string() + ": class '" + id +
                               "' must map to a list of files");
    }
    m.class_ids.push_back(id);
  }
  if (all_integers(m.class_ids)) {
    std::sort(m.class_ids.begin(), m.class_ids.end(),
              [](const std::string& a, const std::string& b) {
                return std::stoll(a) < std::stoll(b);
              });
  } else {
    std::sort(m.class_ids.begin(), m.class_ids.end());
  }
  const fs::path base = path.parent_path();
  for (const auto& id : m.class_ids) {
    std::vector<fs::path> files;
    for (const auto& f : classes.at(id)) {
      fs::path p = f.get<std::string>();
      files.push_back(p.is_absolute() ? p : base / p);
    }
    std::sort(files.begin(), files.end());
    m.files.push_back(std::move(files));
  }
  if (doc.contains("split") && doc.contains("classes")) {
    m.split_json = doc.at("split").dump();
  }
  return m;
}

DatasetSplit load_dataset(const Manifest& manifest, const SplitSpec& split,
                          std::optional<std::pair<int, int>> resize) {
  const std::set<std::string> impostor(split.impostor_classes.begin(),
                                       split.impostor_classes.end());
  for (const auto& id : impostor) {
    if (std::find(manifest.class_ids.begin(), manifest.class_ids.end(), id) ==
        manifest.class_ids.end()) {
      throw std::runtime_error("split: impostor class '" + id +
                               "' not in manifest");
    }
  }

  DatasetSplit out;
  auto read = [&](const fs::path& p) {
    GrayImage img = read_image(p);
    if (resize) img = resize_bilinear(img, resize->first, resize->second);
    if (out.width == 0) {
      out.width = img.width;
      out.height = img.height;
    } else if (img.width != out.width || img.height != out.height) {
      std::ostringstream ss;
      ss << p.string() << ": size " << img.width << "x" << img.height
         << " differs from " << out.width << "x" << out.height;
      throw std::runtime_error(ss.str());
    }
    return img;
  };
  auto add = [&](LabeledImages& dst, const fs::path& p, int label) {
    dst.images.push_back(read(p));
    dst.labels.push_back(label);
    dst.names.push_back(p.string());
  };

  int label = 0;
  for (size_t c = 0; c < manifest.class_ids.size(); ++c) {
    const std::string& id = manifest.class_ids[c];
    const auto& files = manifest.files[c];
    if (files.empty()) {
      throw std::runtime_error("manifest: class '" + id + "' has no files");
    }
    if (impostor.count(id)) {
      for (const auto& f : files) add(out.impostors, f, -1);
      continue;
    }
    const size_t n_train = split.train_per_class > 0
                               ? static_cast<size_t>(split.train_per_class)
                               : files.size();
    if (n_train > files.size()) {
      std::ostringstream ss;
      ss << "class '" << id << "': " << files.size() << " files, "
         << n_train << " requested for training";
      throw std::runtime_error(ss.str());
    }
    size_t n_test = files.size() - n_train;
    if (split.test_per_class > 0) {
      n_test = std::min(n_test, static_cast<size_t>(split.test_per_class));
    }
    for (size_t i = 0; i < n_train; ++i) add(out.train, files[i], label);
    for (size_t i = n_train; i < n_train + n_test; ++i) {
      add(out.test, files[i], label);
    }
    out.class_ids.push_back(id);
    ++label;
  }
  if (out.train.images.empty()) {
    throw std::runtime_error("dataset: no training images");
  }
  return out;
}

Dictionary make_dictionary(const LabeledImages& train) {
  if (train.images.empty()) throw DomainError("make_dictionary: no images");
  const auto n = static_cast<Index>(train.images.front().size());
  Eigen::MatrixXd columns(n, static_cast<Index>(train.images.size()));
  for (size_t j = 0; j < train.images.size(); ++j) {
    const Eigen::VectorXd v = to_vector(train.images[j]);
    if (v.size() != n) {
      throw DomainError(train.names[j] + ": dimension mismatch");
    }
    if (!(v.squaredNorm() > 0.0)) {
      throw DomainError(train.names[j] + ": all-black image cannot be normalized");
    }
    columns.col(static_cast<Index>(j)) = v;
  }
  return Dictionary(std::move(columns), ClassPartition(train.labels));
}

}  // namespace rrc::harness
