//
// Copyright 2026 The pfbandit Authors
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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "pfbandit/vec.hpp"

namespace pfb {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// Key derivation for child streams: a child seed is a pure function of
// (master seed, label). Components holding distinct labels get independent
// streams, so one component's draw count never perturbs another's sequence.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t state = master;
  std::uint64_t mixed = detail::splitmix64(state) ^ detail::fnv1a64(label);
  return detail::splitmix64(mixed);
}

// Seedable xoshiro256++ stream. Single-owner: not safe to share across
// threads; fork() children instead.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = detail::splitmix64(state);
  }

  std::uint64_t seed() const { return seed_; }

  // Child stream keyed on (original seed, label); see derive_seed.
  RandomSource fork(std::string_view label) const {
    return RandomSource(derive_seed(seed_, label));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = detail::rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = detail::rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms per draw.
  double gaussian() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Laplace(0, scale) by inverse CDF; consumes exactly one uniform, and the
  // output is scale * (standard Laplace draw), so common-random-number
  // comparisons across scales are exact.
  double laplace(double scale) {
    double u = uniform() - 0.5;
    double mag = std::log(1.0 - 2.0 * std::abs(u));
    return u >= 0.0 ? -scale * mag : scale * mag;
  }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_{};
};

enum class NoiseKind { kZero, kLaplace, kGaussian };

// Coordinate-wise noise law used by the tree mechanism.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kZero;
  double scale = 0.0;  // Laplace scale lambda or Gaussian stddev sigma
  int dim = 0;

  static NoiseSpec zero(int n) {
    require_dim(n);
    return NoiseSpec{NoiseKind::kZero, 0.0, n};
  }
  static NoiseSpec laplace(double lambda, int n) {
    require_dim(n);
    if (!(lambda > 0.0)) throw std::invalid_argument("NoiseSpec: lambda must be > 0");
    return NoiseSpec{NoiseKind::kLaplace, lambda, n};
  }
  static NoiseSpec gaussian(double sigma, int n) {
    require_dim(n);
    if (!(sigma > 0.0)) throw std::invalid_argument("NoiseSpec: sigma must be > 0");
    return NoiseSpec{NoiseKind::kGaussian, sigma, n};
  }

  // Closed-form upper bound on E||X||_2: 0, sqrt(2n)*lambda, sqrt(n)*sigma.
  double expected_norm() const {
    switch (kind) {
      case NoiseKind::kZero: return 0.0;
      case NoiseKind::kLaplace: return std::sqrt(2.0 * dim) * scale;
      case NoiseKind::kGaussian: return std::sqrt(static_cast<double>(dim)) * scale;
    }
    return 0.0;
  }

 private:
  static void require_dim(int n) {
    if (n < 1) throw std::invalid_argument("NoiseSpec: dimension must be >= 1");
  }
};

// Uniform on the unit sphere S_2^n, by normalizing a standard Gaussian.
inline Point sample_sphere(RandomSource& src, int n) {
  if (n < 1) throw std::invalid_argument("sample_sphere: n must be >= 1");
  Point u(static_cast<std::size_t>(n));
  double nrm = 0.0;
  do {
    for (double& v : u) v = src.gaussian();
    nrm = norm(u);
  } while (nrm == 0.0);
  for (double& v : u) v /= nrm;
  return u;
}

// Uniform in the unit ball B_2^n: sphere sample scaled by U^{1/n}.
inline Point sample_ball(RandomSource& src, int n) {
  Point u = sample_sphere(src, n);
  double r = std::pow(src.uniform_pos(), 1.0 / n);
  for (double& v : u) v *= r;
  return u;
}

// One n-dimensional draw with i.i.d. coordinates from the spec's law.
// Zero consumes no randomness.
inline Point sample_noise(RandomSource& src, const NoiseSpec& spec) {
  Point z = zeros(spec.dim);
  switch (spec.kind) {
    case NoiseKind::kZero:
      break;
    case NoiseKind::kLaplace:
      for (double& v : z) v = src.laplace(spec.scale);
      break;
    case NoiseKind::kGaussian:
      for (double& v : z) v = spec.scale * src.gaussian();
      break;
  }
  return z;
}

}  // namespace pfb
