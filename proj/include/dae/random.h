// Copyright 2026 The DAE Factuality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness helpers. std::mt19937_64 output is fixed by the
// standard, but the <random> distributions are not, so the helpers below
// draw directly from the engine to keep results identical across standard
// libraries.

#ifndef DAE_RANDOM_H_
#define DAE_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace dae {

using Rng = std::mt19937_64;

// Derives an independent seed for a named subsystem from a global seed.
inline uint64_t SplitSeed(uint64_t seed, std::string_view subsystem) {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : subsystem) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  uint64_t z = seed ^ h;  // splitmix64 finalizer
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform integer in [lo, hi], by rejection.
inline int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  if (span == 0) return lo + static_cast<int64_t>(rng());
  const uint64_t limit = Rng::max() - Rng::max() % span;
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<int64_t>(draw % span);
}

// Uniform double in [0, 1).
inline double UniformReal(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double Gaussian(Rng& rng) {
  double u1 = UniformReal(rng);
  while (u1 <= 0.0) u1 = UniformReal(rng);
  const double u2 = UniformReal(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

template <typename T>
void Shuffle(std::vector<T>& v, Rng& rng) {
  for (int64_t i = static_cast<int64_t>(v.size()) - 1; i > 0; --i) {
    std::swap(v[i], v[UniformInt(rng, 0, i)]);
  }
}

}  // namespace dae

#endif  // DAE_RANDOM_H_
