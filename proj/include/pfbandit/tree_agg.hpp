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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pfbandit/random.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::tree {

inline int ceil_log2(int t) {
  int levels = 0;
  int p = 1;
  while (p < t) {
    p <<= 1;
    ++levels;
  }
  return levels;
}

// Noise scale for the Laplace tree mechanism: lambda = Y1 * ln(T) / eps.
inline double calibrate_laplace(double y1, int horizon, double eps) {
  if (!(y1 > 0.0) || !(eps > 0.0) || horizon < 2) {
    throw std::invalid_argument("calibrate_laplace: need y1, eps > 0 and T >= 2");
  }
  return y1 * std::log(static_cast<double>(horizon)) / eps;
}

// Noise scale for the Gaussian tree mechanism:
// sigma = (Y2/eps) * ln(T) * ln(ln(T)/delta).
inline double calibrate_gaussian(double y2, int horizon, double eps, double delta) {
  if (!(y2 > 0.0) || !(eps > 0.0) || !(delta > 0.0) || !(delta < 1.0) || horizon < 2) {
    throw std::invalid_argument(
        "calibrate_gaussian: need y2, eps > 0, 0 < delta < 1, T >= 2");
  }
  double logt = std::log(static_cast<double>(horizon));
  return (y2 / eps) * logt * std::log(logt / delta);
}

// Per-release decomposition: stored noisy subtree sums plus fresh padding
// draws, always ceil(log2 T) noise vectors in total.
struct ReleaseStats {
  int stored_nodes = 0;
  int fresh_draws = 0;
};

// Binary-tree mechanism for continual release of noisy vector prefix sums.
// A balanced tree over the next power of two >= T leaves is allocated up
// front with one noise draw per node; element t is added to the leaf t-1 and
// all its ancestors; release t combines the stored left-sibling nodes along
// the path to leaf t and pads with fresh draws. Strictly sequential,
// single-owner.
class TreeAggregator {
 public:
  TreeAggregator(int horizon, int dim, NoiseSpec noise, RandomSource src)
      : horizon_(horizon), dim_(dim), noise_(std::move(noise)), src_(std::move(src)) {
    if (horizon < 1) throw std::invalid_argument("TreeAggregator: T must be >= 1");
    if (dim < 1) throw std::invalid_argument("TreeAggregator: dim must be >= 1");
    if (noise_.kind != NoiseKind::kZero && horizon < 2) {
      throw std::invalid_argument(
          "TreeAggregator: T = 1 admits no noise decomposition; use Zero noise");
    }
    if (noise_.dim != dim) {
      throw std::invalid_argument("TreeAggregator: noise dimension mismatch");
    }
    levels_ = ceil_log2(horizon);
    leaves_ = 1 << levels_;
    nodes_.resize(static_cast<std::size_t>(2 * leaves_));
    for (int i = 1; i < 2 * leaves_; ++i) nodes_[static_cast<std::size_t>(i)] = draw_noise();
    initial_ = zeros(dim_);
    for (int i = 0; i < levels_; ++i) add_in_place(initial_, draw_noise());
  }

  int horizon() const { return horizon_; }
  int dimension() const { return dim_; }
  int levels() const { return levels_; }

  // L^_0: a sum of ceil(log2 T) fresh draws, released before any input.
  const Point& initial_release() const { return initial_; }

  // Releases L^_t = sum_{s<=t} l_s + sum of ceil(log2 T) noise vectors.
  // t must be the next round (1-based) and at most T.
  Point add_and_release(const Point& item, int t) {
    if (t != next_t_) {
      throw std::invalid_argument("TreeAggregator: out-of-order release");
    }
    if (t > horizon_) throw std::invalid_argument("TreeAggregator: t exceeds T");
    if (static_cast<int>(item.size()) != dim_) {
      throw std::invalid_argument("TreeAggregator: item dimension mismatch");
    }
    ++next_t_;

    // Update leaf t-1 and every ancestor with the new element.
    for (int a = leaves_ + (t - 1); a >= 1; a >>= 1) {
      add_in_place(nodes_[static_cast<std::size_t>(a)], item);
    }

    // PrivateSum: nodes whose parent and right sibling are (weak) ancestors
    // of leaf t, i.e. left siblings along the root-to-leaf-t path. When
    // t = T that set is just the root.
    Point release = zeros(dim_);
    int count = 0;
    if (t == horizon_) {
      add_in_place(release, nodes_[1]);
      count = 1;
    } else {
      for (int q = leaves_ + t; q > 1; q >>= 1) {
        if (q & 1) {
          add_in_place(release, nodes_[static_cast<std::size_t>(q - 1)]);
          ++count;
        }
      }
    }

    // r_t fresh draws pad the decomposition to exactly ceil(log2 T) noise
    // terms. T = 1 is the noiseless degenerate case (levels = 0, root reused).
    int fresh = std::max(levels_ - count, 0);
    for (int i = 0; i < fresh; ++i) add_in_place(release, draw_noise());
    stats_.push_back(ReleaseStats{count, fresh});
    return release;
  }

  std::uint64_t noise_vector_draws() const { return draws_; }
  const std::vector<ReleaseStats>& release_stats() const { return stats_; }

 private:
  Point draw_noise() {
    if (noise_.kind != NoiseKind::kZero) ++draws_;
    return sample_noise(src_, noise_);
  }

  int horizon_;
  int dim_;
  NoiseSpec noise_;
  RandomSource src_;
  int levels_ = 0;
  int leaves_ = 0;
  int next_t_ = 1;
  std::vector<Point> nodes_;  // heap layout, node 1 = root; index 0 unused
  Point initial_;
  std::uint64_t draws_ = 0;
  std::vector<ReleaseStats> stats_;
};

}  // namespace pfb::tree
