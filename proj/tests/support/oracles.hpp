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

// Test-only reference oracles, independent of the library's solve paths.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pfbandit/geometry.hpp"
#include "pfbandit/random.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::testing {

// Euclidean projection onto the standard simplex by the sorting method.
inline Point simplex_projection(const Point& y) {
  const std::size_t n = y.size();
  std::vector<double> u(y);
  std::sort(u.begin(), u.end(), std::greater<>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t i = 0; i < n; ++i) {
    css += u[i];
    double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) {
      rho = static_cast<int>(i + 1);
      theta = t;
    }
  }
  (void)rho;
  Point x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::max(y[i] - theta, 0.0);
  return x;
}

inline Point l2_ball_projection(const Point& y, double radius) {
  double nrm = norm(y);
  return nrm <= radius ? y : scaled(y, radius / nrm);
}

// Feasible samples per kind; not uniform, only guaranteed in the set.
inline Point random_feasible(const DecisionSet& set, RandomSource& src) {
  const int n = set.dimension();
  switch (set.kind()) {
    case SetKind::kSimplex: {
      Point x(static_cast<std::size_t>(n));
      double s = 0.0;
      for (double& v : x) {
        v = -std::log(src.uniform_pos());
        s += v;
      }
      for (double& v : x) v /= s;
      return x;
    }
    case SetKind::kHypercube: {
      Point x(static_cast<std::size_t>(n));
      for (double& v : x) v = src.uniform() * set.param();
      return x;
    }
    case SetKind::kL1Ball: {
      Point x(static_cast<std::size_t>(n));
      double s = 0.0;
      for (double& v : x) {
        v = -std::log(src.uniform_pos());
        s += v;
      }
      double r = set.param() * std::pow(src.uniform_pos(), 1.0 / n);
      for (double& v : x) v = (src.uniform() < 0.5 ? -1.0 : 1.0) * r * v / s;
      return x;
    }
    case SetKind::kL2Ball:
      return scaled(sample_ball(src, n), set.param());
    case SetKind::kPartitionMatroid: {
      // Convex combination of a few random vertices.
      Point x = zeros(n);
      double wsum = 0.0;
      for (int rep = 0; rep < 4; ++rep) {
        Point dir(static_cast<std::size_t>(n));
        for (double& v : dir) v = src.gaussian();
        double w = src.uniform_pos();
        axpy_in_place(x, w, set.lmo(dir));
        wsum += w;
      }
      return scaled(x, 1.0 / wsum);
    }
  }
  return zeros(n);
}

// Kolmogorov-Smirnov distance between samples and a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
  double std_error = 0.0;
};

inline MeanVar mean_var(const std::vector<double>& xs) {
  MeanVar out;
  for (double v : xs) out.mean += v;
  out.mean /= static_cast<double>(xs.size());
  for (double v : xs) out.var += (v - out.mean) * (v - out.mean);
  out.var = xs.size() > 1 ? out.var / static_cast<double>(xs.size() - 1) : 0.0;
  out.std_error = std::sqrt(out.var / static_cast<double>(xs.size()));
  return out;
}

}  // namespace pfb::testing
