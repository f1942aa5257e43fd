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

#include <vector>

#include "rrc/harness/image.hpp"
#include "rrc/harness/rng.hpp"

namespace rrc::harness {

/// A perturbed image plus the mask of pixels that were replaced.
struct Perturbed {
  GrayImage image;
  std::vector<bool> mask;  ///< row-major, true where replaced
  std::size_t count = 0;   ///< number of true entries in mask
};

/// floor(fraction * pixel count), the number of corrupted pixels.
std::size_t corruption_count(const GrayImage& img, double fraction);

/// Replaces corruption_count() distinct pixels, chosen uniformly without
/// replacement, by independent uniform values in [0, 255].
Perturbed corrupt_pixels(const GrayImage& img, double fraction, Rng& rng);

/// Side of the square occluder for an area fraction:
/// round(sqrt(fraction * w * h)), clamped to min(w, h).
int block_side(int width, int height, double fraction);

/// Pastes a block_side() x block_side() center crop of `patch` at a uniformly
/// drawn top-left corner such that the block lies fully inside the image.
/// Throws std::invalid_argument if the patch is smaller than the block.
Perturbed occlude_block(const GrayImage& img, double fraction,
                        const GrayImage& patch, Rng& rng);

/// The built-in occluder: a deterministic texture of oriented gratings and
/// blobs, unrelated to any dataset content.
GrayImage default_patch(int size);

}  // namespace rrc::harness
