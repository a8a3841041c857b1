// Copyright 2026 The setvote Authors
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
//
// Seeded randomness used across the library. The engine is std::mt19937_64
// (bit-reproducible by the standard); all distributions are implemented here
// so that streams do not depend on the standard library's unspecified
// distribution algorithms.

#ifndef SETVOTE_RANDOM_HPP
#define SETVOTE_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace setvote {

// SplitMix64 step; used to whiten seeds and derive per-replication sub-seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for replication `index` of a run seeded with `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = master ^ (0x9E3779B97F4A7C15ULL + index);
  std::uint64_t b = splitmix64(s);
  return a ^ (b + 0x165667B19E3779F9ULL * (index + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0,1), 53-bit resolution.
  double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; never returns zero.
  double uniform_pos() { return 1.0 - uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n) via Lemire's multiply-shift.
  std::uint64_t below(std::uint64_t n) {
    return std::uint64_t((__uint128_t(engine_()) * __uint128_t(n)) >> 64);
  }

  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform_pos();
    double u2 = uniform01();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  // Student t with 3 degrees of freedom: Z / sqrt(chi^2_3 / 3).
  double student_t3() {
    double z = normal();
    double c = normal(), d = normal(), e = normal();
    return z / std::sqrt((c * c + d * d + e * e) / 3.0);
  }

  template <typename T>
  void shuffle(std::span<T> v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = std::size_t(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::vector<std::size_t> permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(p));
    return p;
  }

  // First k entries of a random permutation of {0,...,n-1}.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k > n");
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + std::size_t(below(n - i));
      std::swap(p[i], p[j]);
    }
    p.resize(k);
    return p;
  }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace setvote

#endif  // SETVOTE_RANDOM_HPP
