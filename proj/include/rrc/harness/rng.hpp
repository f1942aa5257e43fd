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
#include <initializer_list>
#include <random>

namespace rrc::harness {

/// Seeded generator with platform-independent draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std:: distributions are implementation-defined, so every
/// draw is derived from raw 64-bit outputs here instead.
///
/// Independent streams are derived with `Rng::stream(seed, {a, b, ...})`: the
/// seed and path words are split into 32-bit halves and fed through
/// std::seed_seq. The harness uses the paths
///   {kStreamCorruption, level_index, query_index}
///   {kStreamOcclusion,  level_index, query_index}
///   {kStreamSynthetic,  class_index, sample_index}  (sample ~0 = prototype)
///   {kStreamPatch}
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  static Rng stream(std::uint64_t seed,
                    std::initializer_list<std::uint64_t> path);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform integer in [lo, hi], by rejection (no modulo bias).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Standard normal via the Marsaglia polar method.
  double normal();

 private:
  explicit Rng(std::mt19937_64 engine) : engine_(engine) {}
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline constexpr std::uint64_t kStreamCorruption = 1;
inline constexpr std::uint64_t kStreamOcclusion = 2;
inline constexpr std::uint64_t kStreamSynthetic = 3;
inline constexpr std::uint64_t kStreamPatch = 4;

}  // namespace rrc::harness
