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
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pfbandit/loss.hpp"
#include "pfbandit/vec.hpp"

namespace pfb {

enum class SetKind { kSimplex, kHypercube, kL1Ball, kL2Ball, kPartitionMatroid };

// Convex decision domain accessed through a linear optimization oracle.
// All LMOs return an extreme point and break ties deterministically by
// lowest coordinate index, so seeded runs reproduce bit for bit.
class DecisionSet {
 public:
  static DecisionSet simplex(int n) {
    DecisionSet s(SetKind::kSimplex, n);
    s.diameter_ = n >= 2 ? std::sqrt(2.0) : 0.0;
    return s;
  }

  static DecisionSet hypercube(int n, double side) {
    if (!(side > 0.0)) throw std::invalid_argument("hypercube: side must be > 0");
    DecisionSet s(SetKind::kHypercube, n);
    s.param_ = side;
    s.diameter_ = side * std::sqrt(static_cast<double>(n));
    return s;
  }

  static DecisionSet l1_ball(int n, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("l1_ball: radius must be > 0");
    DecisionSet s(SetKind::kL1Ball, n);
    s.param_ = radius;
    s.diameter_ = 2.0 * radius;
    s.inner_radius_ = radius / std::sqrt(static_cast<double>(n));
    return s;
  }

  static DecisionSet l2_ball(int n, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("l2_ball: radius must be > 0");
    DecisionSet s(SetKind::kL2Ball, n);
    s.param_ = radius;
    s.diameter_ = 2.0 * radius;
    s.inner_radius_ = radius;
    return s;
  }

  // Base polytope of a partition matroid over consecutive coordinate blocks:
  // per block j of size s_j, exactly rank_j coordinates equal 1, rest 0.
  static DecisionSet partition_matroid(std::vector<int> part_sizes,
                                       std::vector<int> ranks) {
    if (part_sizes.empty() || part_sizes.size() != ranks.size()) {
      throw std::invalid_argument("partition_matroid: sizes/ranks mismatch");
    }
    int n = 0;
    double d2 = 0.0;
    for (std::size_t j = 0; j < part_sizes.size(); ++j) {
      if (part_sizes[j] < 1 || ranks[j] < 0 || ranks[j] > part_sizes[j]) {
        throw std::invalid_argument("partition_matroid: invalid part/rank");
      }
      n += part_sizes[j];
      d2 += 2.0 * std::min(ranks[j], part_sizes[j] - ranks[j]);
    }
    DecisionSet s(SetKind::kPartitionMatroid, n);
    s.part_sizes_ = std::move(part_sizes);
    s.ranks_ = std::move(ranks);
    s.diameter_ = std::sqrt(d2);
    return s;
  }

  SetKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  double diameter() const { return diameter_; }
  std::optional<double> inner_radius() const { return inner_radius_; }
  double param() const { return param_; }
  const std::vector<int>& part_sizes() const { return part_sizes_; }
  const std::vector<int>& ranks() const { return ranks_; }

  // argmin_{x in D} <v, x>, exact per kind.
  Point lmo(const Point& v) const {
    if (static_cast<int>(v.size()) != dim_) {
      throw std::invalid_argument("lmo: direction dimension mismatch");
    }
    Point x = zeros(dim_);
    switch (kind_) {
      case SetKind::kSimplex: {
        int best = 0;
        for (int i = 1; i < dim_; ++i) {
          if (v[i] < v[best]) best = i;
        }
        x[best] = 1.0;
        break;
      }
      case SetKind::kHypercube: {
        for (int i = 0; i < dim_; ++i) x[i] = v[i] < 0.0 ? param_ : 0.0;
        break;
      }
      case SetKind::kL1Ball: {
        int best = 0;
        for (int i = 1; i < dim_; ++i) {
          if (std::abs(v[i]) > std::abs(v[best])) best = i;
        }
        x[best] = v[best] > 0.0 ? -param_ : param_;
        break;
      }
      case SetKind::kL2Ball: {
        double nrm = norm(v);
        if (nrm == 0.0) {
          x[0] = param_;
        } else {
          for (int i = 0; i < dim_; ++i) x[i] = -param_ * v[i] / nrm;
        }
        break;
      }
      case SetKind::kPartitionMatroid: {
        int offset = 0;
        std::vector<int> idx;
        for (std::size_t j = 0; j < part_sizes_.size(); ++j) {
          idx.resize(static_cast<std::size_t>(part_sizes_[j]));
          std::iota(idx.begin(), idx.end(), offset);
          std::stable_sort(idx.begin(), idx.end(),
                           [&](int a, int b) { return v[a] < v[b]; });
          for (int r = 0; r < ranks_[j]; ++r) x[idx[static_cast<std::size_t>(r)]] = 1.0;
          offset += part_sizes_[j];
        }
        break;
      }
    }
    return x;
  }

  // Closed-form membership per kind; test machinery, not an optimization oracle.
  bool contains(const Point& x, double tol = 1e-9) const {
    if (static_cast<int>(x.size()) != dim_) return false;
    switch (kind_) {
      case SetKind::kSimplex: {
        double s = 0.0;
        for (double v : x) {
          if (v < -tol) return false;
          s += v;
        }
        return std::abs(s - 1.0) <= tol;
      }
      case SetKind::kHypercube: {
        for (double v : x) {
          if (v < -tol || v > param_ + tol) return false;
        }
        return true;
      }
      case SetKind::kL1Ball:
        return norm1(x) <= param_ + tol;
      case SetKind::kL2Ball:
        return norm(x) <= param_ + tol;
      case SetKind::kPartitionMatroid: {
        int offset = 0;
        for (std::size_t j = 0; j < part_sizes_.size(); ++j) {
          double s = 0.0;
          for (int i = offset; i < offset + part_sizes_[j]; ++i) {
            if (x[i] < -tol || x[i] > 1.0 + tol) return false;
            s += x[i];
          }
          if (std::abs(s - ranks_[j]) > tol) return false;
          offset += part_sizes_[j];
        }
        return true;
      }
    }
    return false;
  }

  // max_{x in D} ||x - z||_2; the max of a convex function sits at an extreme
  // point, which decomposes per coordinate/part for every supported kind.
  double max_distance(const Point& z) const {
    if (static_cast<int>(z.size()) != dim_) {
      throw std::invalid_argument("max_distance: dimension mismatch");
    }
    switch (kind_) {
      case SetKind::kSimplex: {
        double best = 0.0;
        for (int i = 0; i < dim_; ++i) {
          double d2 = 0.0;
          for (int k = 0; k < dim_; ++k) {
            double e = (k == i ? 1.0 : 0.0) - z[k];
            d2 += e * e;
          }
          best = std::max(best, d2);
        }
        return std::sqrt(best);
      }
      case SetKind::kHypercube: {
        double d2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
          double e = std::max(std::abs(z[i]), std::abs(param_ - z[i]));
          d2 += e * e;
        }
        return std::sqrt(d2);
      }
      case SetKind::kL1Ball: {
        double z2 = dot(z, z);
        double best = 0.0;
        for (int i = 0; i < dim_; ++i) {
          for (double s : {param_, -param_}) {
            double d2 = z2 - z[i] * z[i] + (s - z[i]) * (s - z[i]);
            best = std::max(best, d2);
          }
        }
        return std::sqrt(best);
      }
      case SetKind::kL2Ball:
        return norm(z) + param_;
      case SetKind::kPartitionMatroid: {
        double base = dot(z, z);
        int offset = 0;
        std::vector<double> gain;
        for (std::size_t j = 0; j < part_sizes_.size(); ++j) {
          gain.resize(static_cast<std::size_t>(part_sizes_[j]));
          for (int i = 0; i < part_sizes_[j]; ++i) gain[static_cast<std::size_t>(i)] = 1.0 - 2.0 * z[offset + i];
          std::sort(gain.begin(), gain.end(), std::greater<>());
          for (int r = 0; r < ranks_[j]; ++r) base += gain[static_cast<std::size_t>(r)];
          offset += part_sizes_[j];
        }
        return std::sqrt(std::max(base, 0.0));
      }
    }
    return 0.0;
  }

 private:
  DecisionSet(SetKind kind, int n) : kind_(kind), dim_(n) {
    if (n < 1) throw std::invalid_argument("DecisionSet: dimension must be >= 1");
  }

  SetKind kind_;
  int dim_;
  double param_ = 0.0;  // side or radius
  double diameter_ = 0.0;
  std::optional<double> inner_radius_;
  std::vector<int> part_sizes_;
  std::vector<int> ranks_;
};

// Domain-shrinking wrapper: f'(x) = f((1 - delta/r) x). Querying f' at
// x + delta*u with x in D and ||u|| <= 1 only ever evaluates f inside D,
// provided D contains the origin-centered ball r*B_2^n.
inline LossOracle shrink_wrap(const DecisionSet& set, const LossOracle& f,
                              double delta) {
  auto r = set.inner_radius();
  if (!r) {
    throw std::invalid_argument("shrink_wrap: decision set has no inner radius");
  }
  if (!(delta > 0.0) || delta >= *r) {
    throw std::invalid_argument("shrink_wrap: need 0 < delta < inner radius");
  }
  const double factor = 1.0 - delta / *r;
  return LossOracle(
      [f, factor](const Point& x) { return f.value(scaled(x, factor)); },
      f.lipschitz(), f.dimension());
}

}  // namespace pfb
