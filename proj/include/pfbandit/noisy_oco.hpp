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
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pfbandit/frank_wolfe.hpp"
#include "pfbandit/geometry.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::oco {

// Stochastic gradient oracle: E g~ = grad f_t(x) with E||g~||^2 <= kappa^2.
struct NoisyGradOracle {
  std::function<Point(int t, const Point& x)> fn;
  double kappa = 0.0;
};

// Approximate mirror-map oracle: E||grad omega*(g) - x~|| <= gamma, x~ in D.
struct NoisyMapOracle {
  std::function<Point(const Point& g)> fn;
  double gamma = 0.0;
};

struct OcoTrace {
  std::vector<Point> iterates;   // x~_1..x~_T
  std::vector<Point> grads;      // g~_1..g~_T
  std::vector<Point> dual_sums;  // s_0..s_T, s_t = s_{t-1} + g~_t exactly
  std::vector<double> losses;    // f_t(x~_t)
  double eta = 0.0;
  // Filled by the caller once a comparator is chosen.
  double realized_regret = std::numeric_limits<double>::quiet_NaN();

  double total_loss() const {
    double s = 0.0;
    for (double l : losses) s += l;
    return s;
  }
};

// grad omega*(y) for omega = 0.5||.||^2: the Euclidean projection of y onto
// the domain. Closed form on the l2 ball, conditional gradient elsewhere.
inline Point exact_mirror_map(const DecisionSet& domain, const Point& y, int k_cg) {
  if (domain.kind() == SetKind::kL2Ball) {
    double rho = domain.param();
    double nrm = norm(y);
    return nrm <= rho ? y : scaled(y, rho / nrm);
  }
  return fw::solve(domain, y, k_cg).point;
}

// Dual-averaging loop: x~_t = NoisyMap(-eta s_{t-1}), s_t = s_{t-1} + g~_t,
// with eta = eta_multiplier * D_omega / (kappa sqrt(T)).
inline OcoTrace run(int horizon, int dim, double d_omega,
                    const NoisyGradOracle& grad, const NoisyMapOracle& map,
                    const std::function<double(int t, const Point& x)>& loss_value,
                    double eta_multiplier = 1.0) {
  if (horizon < 1) throw std::invalid_argument("oco::run: T must be >= 1");
  if (dim < 1) throw std::invalid_argument("oco::run: dim must be >= 1");
  if (!(grad.kappa > 0.0)) throw std::invalid_argument("oco::run: kappa must be > 0");
  OcoTrace trace;
  trace.eta = eta_multiplier * d_omega / (grad.kappa * std::sqrt(static_cast<double>(horizon)));
  Point s = zeros(dim);
  trace.dual_sums.push_back(s);
  for (int t = 1; t <= horizon; ++t) {
    trace.iterates.push_back(map.fn(scaled(s, -trace.eta)));
    const Point& x_t = trace.iterates.back();
    check_same_dim(x_t, s, "oco::run iterate");
    trace.losses.push_back(loss_value(t, x_t));
    Point g = grad.fn(t, x_t);
    check_same_dim(g, s, "oco::run gradient");
    add_in_place(s, g);
    trace.grads.push_back(std::move(g));
    trace.dual_sums.push_back(s);
  }
  return trace;
}

// Explicit regret bound 2 sqrt(T) kappa D_omega + sqrt(T) kappa D_omega / 2
// + T kappa gamma for the loop above at eta = D_omega/(kappa sqrt(T)).
inline double regret_bound(int horizon, double kappa, double gamma, double d_omega) {
  if (horizon < 1 || !(kappa > 0.0) || gamma < 0.0 || !(d_omega > 0.0)) {
    throw std::invalid_argument("regret_bound: invalid inputs");
  }
  double rt = std::sqrt(static_cast<double>(horizon));
  return 2.0 * rt * kappa * d_omega + 0.5 * rt * kappa * d_omega +
         horizon * kappa * gamma;
}

}  // namespace pfb::oco
