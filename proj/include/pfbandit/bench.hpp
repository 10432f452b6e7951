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
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfbandit/geometry.hpp"
#include "pfbandit/loss.hpp"
#include "pfbandit/private_bandit.hpp"
#include "pfbandit/random.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::bench {

enum class AdversaryKind { kFixedLinear, kRotatingLinear, kQuadratic };

// Synthetic oblivious loss sequences, normalized to be exactly L-Lipschitz
// on the domain with minimum 0 there. Linear losses are offset by their
// domain minimum (one LMO call); quadratic curvature is scaled so the
// gradient norm over the domain tops out at L.
class Adversary {
 public:
  static Adversary fixed_linear(const DecisionSet& domain, Point direction, double lipschitz) {
    return rotating_linear(domain, {std::move(direction)}, 1, lipschitz);
  }

  static Adversary rotating_linear(const DecisionSet& domain, std::vector<Point> directions,
                                   int period, double lipschitz) {
    if (directions.empty()) throw std::invalid_argument("Adversary: no directions");
    if (period < 1) throw std::invalid_argument("Adversary: period must be >= 1");
    Adversary a(AdversaryKind::kRotatingLinear, domain, lipschitz);
    if (directions.size() == 1) a.kind_ = AdversaryKind::kFixedLinear;
    a.period_ = period;
    for (Point& c : directions) {
      double nrm = norm(c);
      if (static_cast<int>(c.size()) != domain.dimension() || nrm == 0.0) {
        throw std::invalid_argument("Adversary: bad direction");
      }
      Point unit = scaled(c, lipschitz / nrm);
      double offset = -dot(unit, domain.lmo(unit));
      a.directions_.push_back(std::move(unit));
      a.offsets_.push_back(offset);
    }
    return a;
  }

  static Adversary quadratic(const DecisionSet& domain, std::vector<Point> centers,
                             double lipschitz) {
    if (centers.empty()) throw std::invalid_argument("Adversary: no centers");
    Adversary a(AdversaryKind::kQuadratic, domain, lipschitz);
    for (Point& z : centers) {
      if (static_cast<int>(z.size()) != domain.dimension() || !domain.contains(z, 1e-9)) {
        throw std::invalid_argument("Adversary: quadratic center must lie in the domain");
      }
      double reach = domain.max_distance(z);
      a.curvatures_.push_back(reach > 0.0 ? lipschitz / reach : 0.0);
      a.centers_.push_back(std::move(z));
    }
    return a;
  }

  AdversaryKind kind() const { return kind_; }
  double lipschitz() const { return lipschitz_; }
  const DecisionSet& domain() const { return domain_; }
  bool all_linear() const { return kind_ != AdversaryKind::kQuadratic; }

  // f_t(x), t 1-based.
  double value(int t, const Point& x) const {
    std::size_t i = index_for(t);
    if (all_linear()) return dot(directions_[i], x) + offsets_[i];
    return 0.5 * curvatures_[i] * sqdist(x, centers_[i]);
  }

  Point gradient(int t, const Point& x) const {
    std::size_t i = index_for(t);
    if (all_linear()) return directions_[i];
    return scaled(sub(x, centers_[i]), curvatures_[i]);
  }

  double curvature(int t) const {
    return all_linear() ? 0.0 : curvatures_[index_for(t)];
  }

  // Value-only oracles for the bandit loop; each counts its own queries.
  std::vector<LossOracle> make_losses(int horizon) const {
    std::vector<LossOracle> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int t = 1; t <= horizon; ++t) {
      Adversary self = *this;
      out.emplace_back([self, t](const Point& x) { return self.value(t, x); },
                       lipschitz_, domain_.dimension());
    }
    return out;
  }

  // Coefficient sum of f_1..f_T (linear kinds only).
  Point aggregate_direction(int horizon) const {
    Point s = zeros(domain_.dimension());
    for (int t = 1; t <= horizon; ++t) add_in_place(s, directions_[index_for(t)]);
    return s;
  }

  double aggregate_value(const Point& x, int horizon) const {
    double s = 0.0;
    for (int t = 1; t <= horizon; ++t) s += value(t, x);
    return s;
  }

  Point aggregate_gradient(const Point& x, int horizon) const {
    Point g = zeros(domain_.dimension());
    for (int t = 1; t <= horizon; ++t) add_in_place(g, gradient(t, x));
    return g;
  }

 private:
  Adversary(AdversaryKind kind, DecisionSet domain, double lipschitz)
      : kind_(kind), domain_(std::move(domain)), lipschitz_(lipschitz) {
    if (!(lipschitz > 0.0)) throw std::invalid_argument("Adversary: L must be > 0");
  }

  std::size_t index_for(int t) const {
    std::size_t count = all_linear() ? directions_.size() : centers_.size();
    return static_cast<std::size_t>(((t - 1) / period_) % static_cast<int>(count));
  }

  static double sqdist(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
  }

  AdversaryKind kind_;
  DecisionSet domain_;
  double lipschitz_;
  int period_ = 1;
  std::vector<Point> directions_;
  std::vector<double> offsets_;
  std::vector<Point> centers_;
  std::vector<double> curvatures_;
};

struct ComparatorResult {
  double value = 0.0;
  double gap_certificate = 0.0;  // upper bound on value - true minimum
  Point minimizer;
};

// min_x sum_t f_t(x): exact via one LMO call when the sum is linear,
// otherwise Frank-Wolfe on the aggregate with a duality-gap certificate.
inline ComparatorResult comparator_loss(const Adversary& adversary, const DecisionSet& domain,
                                        int horizon, int k_cg) {
  ComparatorResult out;
  if (adversary.all_linear()) {
    Point coef = adversary.aggregate_direction(horizon);
    out.minimizer = domain.lmo(coef);
    out.value = adversary.aggregate_value(out.minimizer, horizon);
    out.gap_certificate = 0.0;
    return out;
  }
  if (k_cg < 1) throw std::invalid_argument("comparator_loss: k_cg must be >= 1");
  // The aggregate gradient of the quadratic sum is A x - w with constants
  // accumulated in one pass over the horizon.
  double total_curvature = 0.0;
  Point weighted_centers = zeros(domain.dimension());
  for (int t = 1; t <= horizon; ++t) {
    Point g0 = adversary.gradient(t, zeros(domain.dimension()));
    total_curvature += adversary.curvature(t);
    axpy_in_place(weighted_centers, -1.0, g0);
  }
  auto aggregate_grad = [&](const Point& x) {
    Point g = scaled(x, total_curvature);
    axpy_in_place(g, -1.0, weighted_centers);
    return g;
  };
  Point x = domain.lmo(aggregate_grad(zeros(domain.dimension())));
  double gap = std::numeric_limits<double>::infinity();
  for (int t = 1; t < k_cg; ++t) {
    Point grad = aggregate_grad(x);
    Point s = domain.lmo(grad);
    gap = std::min(gap, dot(grad, sub(x, s)));  // FW duality gap >= suboptimality
    double gamma = 2.0 / (t + 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += gamma * (s[i] - x[i]);
  }
  Point grad = aggregate_grad(x);
  gap = std::min(gap, dot(grad, sub(x, domain.lmo(grad))));
  out.value = adversary.aggregate_value(x, horizon);
  if (!std::isfinite(out.value)) throw std::runtime_error("comparator_loss: non-finite value");
  out.gap_certificate = std::max(gap, 0.0);
  out.minimizer = std::move(x);
  return out;
}

// Cumulative played loss minus the comparator.
inline double regret(const bandit::RegretTrace& trace, double comparator) {
  if (trace.cumulative.empty()) return -comparator;
  return trace.cumulative.back() - comparator;
}

// Fills trace.comparator and the per-step curve R_t = sum_{s<=t} f_s(x_s)
// - sum_{s<=t} f_s(x*), measured against the full-horizon comparator point.
inline void attach_comparator(bandit::RegretTrace& trace, const Adversary& adversary,
                              const ComparatorResult& comparator) {
  trace.comparator = comparator.value;
  trace.regret_curve.clear();
  trace.regret_curve.reserve(trace.losses.size());
  double hindsight = 0.0;
  for (std::size_t t = 0; t < trace.losses.size(); ++t) {
    hindsight += adversary.value(static_cast<int>(t) + 1, comparator.minimizer);
    trace.regret_curve.push_back(trace.cumulative[t] - hindsight);
  }
}

// Monte-Carlo check of the operator-norm bound on k random unit columns:
// violation iff ||Z|| * Delta exceeds 10 * Delta * factor. The worst case
// over ||c|| <= Delta is realized by the top singular pair, so ||Z|| * Delta
// is the exact supremum of ||Z c||.
inline double concentration_check(int n, int k, double delta, double delta_cap,
                                  int trials, const RandomSource& src) {
  if (trials < 100) throw std::invalid_argument("concentration_check: trials must be >= 100");
  if (n < 1 || k < 1) throw std::invalid_argument("concentration_check: bad n or k");
  RandomSource draw_src = src.fork("concentration/draws");
  RandomSource start_src = src.fork("concentration/power-iteration");
  const double bound = 10.0 * delta_cap * bandit::l2_concentration_factor(n, k, delta);

  int violations = 0;
  std::vector<Point> cols(static_cast<std::size_t>(k));
  for (int trial = 0; trial < trials; ++trial) {
    for (auto& c : cols) c = sample_sphere(draw_src, n);
    // Power iteration on Z Z^T (n x n), 50 rounds, seeded start.
    Point v = sample_sphere(start_src, n);
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
      Point w = zeros(n);
      for (const auto& c : cols) axpy_in_place(w, dot(c, v), c);
      lambda = norm(w);
      if (lambda == 0.0) break;
      v = scaled(w, 1.0 / lambda);
    }
    double op_norm = std::sqrt(lambda);
    if (op_norm * delta_cap > bound) ++violations;
  }
  return static_cast<double>(violations) / trials;
}

struct ExponentFit {
  std::vector<int> grid;           // usable T values
  std::vector<double> mean_regrets;
  std::vector<double> std_errors;
  double slope = 0.0;
  double half_width = 0.0;  // bootstrap 95% half-width
  int excluded_points = 0;  // grid points dropped for nonpositive mean regret
};

// Least-squares slope of log(mean regret) vs log(T), with a seed-level
// bootstrap confidence half-width. runner(T, seed_index) returns one
// realized regret.
inline ExponentFit fit_exponent(const std::vector<int>& grid,
                                const std::function<double(int, int)>& runner,
                                int seeds, const RandomSource& src,
                                int bootstrap_resamples = 200) {
  if (grid.size() < 4) throw std::invalid_argument("fit_exponent: need a grid of >= 4 horizons");
  if (seeds < 10) throw std::invalid_argument("fit_exponent: need >= 10 seeds");
  for (int t : grid) {
    int r = static_cast<int>(std::llround(std::sqrt(static_cast<double>(t))));
    if (r * r != t) {
      throw std::invalid_argument("fit_exponent: T = " + std::to_string(t) +
                                  " is not a perfect square");
    }
  }

  std::vector<std::vector<double>> samples(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    samples[i].reserve(static_cast<std::size_t>(seeds));
    for (int s = 0; s < seeds; ++s) samples[i].push_back(runner(grid[i], s));
  }

  auto slope_of = [](const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      num += (xs[i] - mx) * (ys[i] - my);
      den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
  };

  ExponentFit fit;
  std::vector<double> log_t, log_r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double mean = 0.0;
    for (double v : samples[i]) mean += v;
    mean /= samples[i].size();
    double var = 0.0;
    for (double v : samples[i]) var += (v - mean) * (v - mean);
    var = samples[i].size() > 1 ? var / (samples[i].size() - 1) : 0.0;
    if (mean <= 0.0) {
      ++fit.excluded_points;
      continue;
    }
    fit.grid.push_back(grid[i]);
    fit.mean_regrets.push_back(mean);
    fit.std_errors.push_back(std::sqrt(var / samples[i].size()));
    log_t.push_back(std::log(static_cast<double>(grid[i])));
    log_r.push_back(std::log(mean));
  }
  if (fit.grid.size() < 2) {
    throw std::runtime_error("fit_exponent: fewer than 2 usable grid points after exclusions");
  }
  fit.slope = slope_of(log_t, log_r);

  RandomSource boot = src.fork("fit/bootstrap");
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(bootstrap_resamples));
  for (int b = 0; b < bootstrap_resamples; ++b) {
    std::vector<double> bx, by;
    for (std::size_t i = 0, gi = 0; i < grid.size(); ++i) {
      if (gi >= fit.grid.size() || grid[i] != fit.grid[gi]) continue;
      const auto& pool = samples[i];
      double mean = 0.0;
      for (int s = 0; s < seeds; ++s) {
        mean += pool[boot.next_u64() % pool.size()];
      }
      mean /= seeds;
      if (mean > 0.0) {
        bx.push_back(std::log(static_cast<double>(grid[i])));
        by.push_back(std::log(mean));
      }
      ++gi;
    }
    if (bx.size() >= 2) slopes.push_back(slope_of(bx, by));
  }
  if (!slopes.empty()) {
    std::sort(slopes.begin(), slopes.end());
    auto quantile = [&](double q) {
      double pos = q * (slopes.size() - 1);
      std::size_t lo = static_cast<std::size_t>(pos);
      std::size_t hi = std::min(lo + 1, slopes.size() - 1);
      return slopes[lo] + (pos - lo) * (slopes[hi] - slopes[lo]);
    };
    fit.half_width = 0.5 * (quantile(0.975) - quantile(0.025));
  }
  return fit;
}

}  // namespace pfb::bench
