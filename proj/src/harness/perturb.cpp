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

#include "rrc/harness/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace rrc::harness {
namespace {

void check_fraction(double fraction, bool allow_one) {
  const bool ok = fraction >= 0.0 && (allow_one ? fraction <= 1.0 : fraction < 1.0);
  if (!ok) {
    throw std::invalid_argument("perturbation fraction out of range");
  }
}

}  // namespace

std::size_t corruption_count(const GrayImage& img, double fraction) {
  check_fraction(fraction, true);
  // The offset absorbs representation error, e.g. 0.7 * 10 = 6.999...
  const double raw = fraction * static_cast<double>(img.size());
  return std::min(img.size(), static_cast<std::size_t>(std::floor(raw + 1e-9)));
}

Perturbed corrupt_pixels(const GrayImage& img, double fraction, Rng& rng) {
  Perturbed out{img, std::vector<bool>(img.size(), false), 0};
  const std::size_t count = corruption_count(img, fraction);
  std::vector<std::size_t> order(img.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `count` entries are a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(i, order.size() - 1));
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t p = order[i];
    out.image.pixels[p] = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    out.mask[p] = true;
  }
  out.count = count;
  return out;
}

int block_side(int width, int height, double fraction) {
  check_fraction(fraction, false);
  const double area = fraction * static_cast<double>(width) * height;
  const auto side = static_cast<int>(std::lround(std::sqrt(area)));
  return std::min({side, width, height});
}

Perturbed occlude_block(const GrayImage& img, double fraction,
                        const GrayImage& patch, Rng& rng) {
  Perturbed out{img, std::vector<bool>(img.size(), false), 0};
  const int s = block_side(img.width, img.height, fraction);
  if (s == 0) return out;
  if (patch.width < s || patch.height < s) {
    std::ostringstream ss;
    ss << "occlude_block: patch " << patch.width << "x" << patch.height
       << " smaller than block side " << s;
    throw std::invalid_argument(ss.str());
  }
  const auto x0 = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(img.width - s)));
  const auto y0 = static_cast<int>(rng.uniform_int(0, static_cast<std::uint64_t>(img.height - s)));
  const int px = (patch.width - s) / 2;
  const int py = (patch.height - s) / 2;
  for (int y = 0; y < s; ++y) {
    for (int x = 0; x < s; ++x) {
      out.image.at(x0 + x, y0 + y) = patch.at(px + x, py + y);
      out.mask[static_cast<std::size_t>(y0 + y) * img.width + (x0 + x)] = true;
    }
  }
  out.count = static_cast<std::size_t>(s) * static_cast<std::size_t>(s);
  return out;
}

GrayImage default_patch(int size) {
  GrayImage img(size, size);
  Rng rng = Rng::stream(0x0cc10de5ULL, {kStreamPatch});
  struct Grating { double fx, fy, phase, amp; };
  std::vector<Grating> gratings(5);
  for (auto& g : gratings) {
    const double angle = rng.uniform(0.0, M_PI);
    const double freq = rng.uniform(0.15, 0.6);
    g = {freq * std::cos(angle), freq * std::sin(angle),
         rng.uniform(0.0, 2.0 * M_PI), rng.uniform(15.0, 35.0)};
  }
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double v = 128.0;
      for (const auto& g : gratings) {
        v += g.amp * std::sin(g.fx * x + g.fy * y + g.phase);
      }
      v += rng.uniform(-20.0, 20.0);
      img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return img;
}

}  // namespace rrc::harness
