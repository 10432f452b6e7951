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

#include <cmath>
#include <stdexcept>
#include <utility>

#include "pfbandit/geometry.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::fw {

// Regularized quadratic min_{x in D} q(x) = 0.5||x||^2 - <v, x>.
struct QuadraticTarget {
  Point linear_term;
  const DecisionSet* domain = nullptr;
};

struct CgResult {
  Point point;            // x_k, a convex combination of LMO vertices
  int iterations = 0;     // k
  double gap_bound = 0.0;       // 10 D^2 / k on q(x_k) - q(x*)
  double distance_bound = 0.0;  // sqrt(20) D / sqrt(k) on ||x_k - x*||
};

inline double objective(const Point& x, const Point& v) {
  return 0.5 * dot(x, x) - dot(v, x);
}

// Conditional gradient with step size 2/(t+2) and no line search. The k-call
// LMO budget includes the initial vertex lmo(-v); k-1 update steps follow.
template <typename Lmo>
CgResult solve_with_lmo(Lmo&& lmo, const Point& v, double diameter, int k) {
  if (k < 1) throw std::invalid_argument("fw::solve: k must be >= 1");
  Point x = lmo(scaled(v, -1.0));
  for (int t = 1; t < k; ++t) {
    Point grad = sub(x, v);
    Point s = lmo(grad);
    double gamma = 2.0 / (t + 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += gamma * (s[i] - x[i]);
  }
  CgResult out;
  out.point = std::move(x);
  out.iterations = k;
  out.gap_bound = 10.0 * diameter * diameter / k;
  out.distance_bound = std::sqrt(20.0) * diameter / std::sqrt(static_cast<double>(k));
  return out;
}

inline CgResult solve(const DecisionSet& domain, const Point& v, int k) {
  if (static_cast<int>(v.size()) != domain.dimension()) {
    throw std::invalid_argument("fw::solve: linear term dimension mismatch");
  }
  return solve_with_lmo([&domain](const Point& d) { return domain.lmo(d); }, v,
                        domain.diameter(), k);
}

inline CgResult solve(const QuadraticTarget& target, int k) {
  return solve(*target.domain, target.linear_term, k);
}

}  // namespace pfb::fw
