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

#include "pfbandit/loss.hpp"
#include "pfbandit/random.hpp"
#include "pfbandit/vec.hpp"

namespace pfb {

// One-point estimate (n/delta) * f(x + delta*u) * u of the smoothed-loss
// gradient at x; unbiased when u is uniform on the unit sphere. Feasibility
// of x + delta*u is the caller's concern (enlarged domain or shrink wrap).
inline Point one_point_gradient(const LossOracle& f, const Point& x,
                                double delta, const Point& u) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("one_point_gradient: delta must be > 0");
  }
  check_same_dim(x, u, "one_point_gradient");
  if (std::abs(norm(u) - 1.0) > 1e-9) {
    throw std::invalid_argument("one_point_gradient: u must be a unit vector");
  }
  const int n = f.dimension();
  Point query = x;
  axpy_in_place(query, delta, u);
  const double scale = (static_cast<double>(n) / delta) * f.value(query);
  return scaled(u, scale);
}

struct MonteCarloValue {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo estimate of the ball-smoothed value E_{u ~ B_2^n} f(x + delta*u)
// from m samples, with its standard error.
inline MonteCarloValue smoothed_value(const LossOracle& f, const Point& x,
                                      double delta, int m, RandomSource& src) {
  if (m < 1) throw std::invalid_argument("smoothed_value: m must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("smoothed_value: delta must be > 0");
  const int n = f.dimension();
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < m; ++i) {
    Point query = x;
    axpy_in_place(query, delta, sample_ball(src, n));
    double v = f.value(query);
    sum += v;
    sumsq += v * v;
  }
  MonteCarloValue out;
  out.value = sum / m;
  if (m > 1) {
    double var = (sumsq - sum * sum / m) / (m - 1);
    out.std_error = std::sqrt(std::max(var, 0.0) / m);
  }
  return out;
}

// Average of m one-point estimates with fresh sphere draws; the reference
// oracle for unbiasedness checks.
inline Point reference_smoothed_gradient(const LossOracle& f, const Point& x,
                                         double delta, int m,
                                         RandomSource& src) {
  if (m < 1) {
    throw std::invalid_argument("reference_smoothed_gradient: m must be >= 1");
  }
  const int n = f.dimension();
  Point mean = zeros(n);
  for (int i = 0; i < m; ++i) {
    add_in_place(mean, one_point_gradient(f, x, delta, sample_sphere(src, n)));
  }
  return scaled(mean, 1.0 / m);
}

}  // namespace pfb
