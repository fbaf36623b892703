// include/stitchguard/rng.hpp

// Copyright 2026  StitchGuard Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness with a fixed cross-platform draw algorithm. std::
// distributions are implementation-defined, so uniform draws are produced
// directly from the mt19937_64 stream here.

#ifndef STITCHGUARD_RNG_HPP_
#define STITCHGUARD_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace stitchguard {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// FNV-1a, stable across platforms (std::hash is not).
inline std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t hash64(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (std::uint64_t p : parts) h = hash_combine(h, p);
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next() { return gen_(); }

  // Inclusive bounds.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return lo + static_cast<std::int64_t>(next());
    const auto wide =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(range);
    return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
  }

  double uniform_real(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  double normal() {
    // Box-Muller; one value per call keeps the stream layout simple.
    double u1 = uniform_real(0.0, 1.0);
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform_real(0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  Rng fork(std::uint64_t tag) { return Rng(hash64({next(), tag})); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace stitchguard

#endif  // STITCHGUARD_RNG_HPP_
