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
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfbandit/frank_wolfe.hpp"
#include "pfbandit/geometry.hpp"
#include "pfbandit/loss.hpp"
#include "pfbandit/random.hpp"
#include "pfbandit/smoothing.hpp"
#include "pfbandit/tree_agg.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::bandit {

enum class PrivacyMode { kNone, kPure, kApprox };

struct PrivacySpec {
  PrivacyMode mode = PrivacyMode::kNone;
  double epsilon = 0.0;
  double delta = 0.0;

  static PrivacySpec none() { return {}; }
  static PrivacySpec pure(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("PrivacySpec: epsilon must be > 0");
    return {PrivacyMode::kPure, eps, 0.0};
  }
  static PrivacySpec approx(double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0) || !(delta < 1.0)) {
      throw std::invalid_argument("PrivacySpec: need epsilon > 0, 0 < delta < 1");
    }
    return {PrivacyMode::kApprox, eps, delta};
  }
};

// How perturbed plays x~ + delta*u stay inside the loss's domain of
// definition: trust an enlarged domain, or query through the shrink wrapper.
enum class FeasibilityMode { kEnlargedDomain, kShrinkWrap };

struct BanditParams {
  int horizon = 0;       // T
  int rounds = 0;        // T_r = sqrt(T)
  int batch = 0;         // T_b = T / T_r
  double eta = 0.0;          // D / (T^{3/4} n^{1/2} L)
  double delta_smooth = 0.0; // D n^{1/2} / T^{1/4}
  int dim = 0;
  double lipschitz = 0.0;
  double diameter = 0.0;
  PrivacySpec privacy;
  FeasibilityMode feasibility = FeasibilityMode::kEnlargedDomain;
  NoiseSpec noise;
};

// |F_t| bound for one scaled value query: M_F = L * D * n / delta_smooth.
inline double per_term_scalar_bound(const BanditParams& p) {
  return p.lipschitz * p.diameter * p.dim / p.delta_smooth;
}

// Bound factor from the random-vector concentration inequality:
// log((n+k)/delta) + sqrt((1 + k/n) log((n+k)/delta)).
inline double l2_concentration_factor(double n, double k, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0) || !(n >= 1.0) || !(k >= 1.0)) {
    throw std::invalid_argument("l2_concentration_factor: invalid inputs");
  }
  double lg = std::log((n + k) / delta);
  return lg + std::sqrt((1.0 + k / n) * lg);
}

// kappa^2 = T_b (L D n / delta)^2 + T_b^2 L^2, the second-moment bound on a
// batch gradient estimate.
inline double gradient_batch_norm_bound(const BanditParams& p) {
  double mf = per_term_scalar_bound(p);
  double tb = static_cast<double>(p.batch);
  return tb * mf * mf + tb * tb * p.lipschitz * p.lipschitz;
}

namespace detail {

// First-principles l1 sensitivity of one tree element: T_b vectors, each a
// unit vector scaled by at most M_F, giving T_b * sqrt(n) * M_F.
inline double l1_sensitivity_first_principles(const BanditParams& p) {
  return p.batch * std::sqrt(static_cast<double>(p.dim)) * per_term_scalar_bound(p);
}

// High-probability l2 bound on a batch gradient: 10 * Delta * factor with
// the conservative Delta = sqrt(T_b) * M_F (the per-entry variant uses
// Delta = M_F).
inline double l2_sensitivity_highprob(const BanditParams& p, double delta0,
                                      bool conservative) {
  double mf = per_term_scalar_bound(p);
  double delta_cap = conservative ? std::sqrt(static_cast<double>(p.batch)) * mf : mf;
  return 10.0 * delta_cap * l2_concentration_factor(p.dim, p.batch, delta0);
}

// Displayed Gaussian scale: (T^{1/4} n^{1/2} L / eps) * ln T * ln(T/delta) *
// (ln((n+T)/delta) + sqrt((1 + T^{1/2}/n) ln((n+T)/delta))).
inline double gaussian_scale_displayed(int horizon, int n, double lipschitz,
                                       double eps, double delta) {
  double t = static_cast<double>(horizon);
  double lead = std::pow(t, 0.25) * std::sqrt(static_cast<double>(n)) * lipschitz / eps;
  double factor = l2_concentration_factor(n, std::sqrt(t), delta);
  return lead * std::log(t) * std::log(t / delta) * factor;
}

// Derived Gaussian scale along the proof chain: delta_0 = delta/(2 sqrt(T)),
// delta_1 = delta/2, sigma = Y2 * ln T * ln(T/delta_1) / eps with the
// conservative Y2.
inline double gaussian_scale_derived(const BanditParams& p, double eps, double delta) {
  double t = static_cast<double>(p.horizon);
  double delta0 = delta / (2.0 * std::sqrt(t));
  double y2 = l2_sensitivity_highprob(p, delta0, /*conservative=*/true);
  return y2 * std::log(t) * std::log(t / (delta / 2.0)) / eps;
}

}  // namespace detail

// Parameter schedule: T_r = sqrt(T), T_b = T/T_r, eta = D/(T^{3/4} n^{1/2} L),
// delta_smooth = D sqrt(n) / T^{1/4}, plus the noise scale for the requested
// privacy regime. T must be a perfect square.
inline BanditParams schedule(int horizon, int n, double lipschitz, double diameter,
                             PrivacySpec privacy,
                             FeasibilityMode feasibility = FeasibilityMode::kEnlargedDomain) {
  if (horizon < 1) throw std::invalid_argument("schedule: T must be >= 1");
  int tr = static_cast<int>(std::llround(std::sqrt(static_cast<double>(horizon))));
  if (tr * tr != horizon) {
    throw std::invalid_argument("schedule: T = " + std::to_string(horizon) +
                                " is not a perfect square");
  }
  if (n < 1) throw std::invalid_argument("schedule: n must be >= 1");
  if (!(lipschitz > 0.0) || !(diameter > 0.0)) {
    throw std::invalid_argument("schedule: L and D must be > 0");
  }

  BanditParams p;
  p.horizon = horizon;
  p.rounds = tr;
  p.batch = horizon / tr;
  p.dim = n;
  p.lipschitz = lipschitz;
  p.diameter = diameter;
  p.privacy = privacy;
  p.feasibility = feasibility;
  double t = static_cast<double>(horizon);
  p.eta = diameter / (std::pow(t, 0.75) * std::sqrt(static_cast<double>(n)) * lipschitz);
  p.delta_smooth = diameter * std::sqrt(static_cast<double>(n)) / std::pow(t, 0.25);

  switch (privacy.mode) {
    case PrivacyMode::kNone:
      p.noise = NoiseSpec::zero(n);
      break;
    case PrivacyMode::kPure: {
      double y1 = detail::l1_sensitivity_first_principles(p);
      p.noise = NoiseSpec::laplace(tree::calibrate_laplace(y1, horizon, privacy.epsilon), n);
      break;
    }
    case PrivacyMode::kApprox: {
      double derived = detail::gaussian_scale_derived(p, privacy.epsilon, privacy.delta);
      double displayed = detail::gaussian_scale_displayed(horizon, n, lipschitz,
                                                          privacy.epsilon, privacy.delta);
      p.noise = NoiseSpec::gaussian(std::max(derived, displayed), n);
      break;
    }
  }
  return p;
}

struct RegretTrace {
  std::vector<Point> played;       // x_t, t = 1..T
  std::vector<double> losses;      // f_t(x_t)
  std::vector<double> cumulative;  // prefix sums of losses
  std::vector<Point> round_points;     // x~_0..x~_{T_r}
  std::vector<Point> releases;         // s~_0..s~_{T_r}
  std::vector<Point> batch_gradients;  // g~_1..g~_{T_r}
  long long loss_queries = 0;
  long long lmo_calls_rounds = 0;  // CG calls inside the round loop (= T)
  long long lmo_calls_total = 0;   // including the x~_0 bootstrap solve
  std::uint64_t noise_vector_draws = 0;
  BanditParams params;

  // Filled by the benchmark layer.
  double comparator = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> regret_curve;
};

// The batched bandit loop. Per round R: T_b perturbed plays of x~_{R-1}
// accumulate the batch gradient estimate, the tree releases s~_R, and the
// conditional-gradient step computes x~_R from the stale release s~_{R-1}
// (v = -eta * s~_{R-1}, k = T_b). Child streams "plays" and "tree" are forked
// from the source's seed so the two components' draw counts never interact.
inline RegretTrace run(const DecisionSet& domain,
                       const std::vector<LossOracle>& losses,
                       const BanditParams& params, const RandomSource& src) {
  if (static_cast<int>(losses.size()) != params.horizon) {
    throw std::invalid_argument("bandit::run: need exactly T loss oracles");
  }
  if (domain.dimension() != params.dim) {
    throw std::invalid_argument("bandit::run: domain dimension mismatch");
  }

  std::vector<LossOracle> queried;
  queried.reserve(losses.size());
  if (params.feasibility == FeasibilityMode::kShrinkWrap) {
    auto r = domain.inner_radius();
    if (!r || params.delta_smooth >= *r) {
      throw std::invalid_argument(
          "bandit::run: shrink wrap needs delta_smooth < inner radius");
    }
    for (const auto& f : losses) queried.push_back(shrink_wrap(domain, f, params.delta_smooth));
  } else {
    queried = losses;
  }

  RandomSource plays_src = src.fork("bandit/plays");
  RandomSource tree_src = src.fork("bandit/tree");

  RegretTrace trace;
  trace.params = params;
  const int n = params.dim;
  const double delta = params.delta_smooth;

  tree::TreeAggregator agg(params.rounds, n, params.noise, std::move(tree_src));

  // x~_0: minimum-norm feasible point, the eta -> 0 limit of the CG step.
  fw::CgResult boot = fw::solve(domain, zeros(n), params.batch);
  trace.lmo_calls_total += params.batch;
  trace.round_points.push_back(boot.point);
  trace.releases.push_back(agg.initial_release());  // s~_0

  double cumulative = 0.0;
  for (int round = 1; round <= params.rounds; ++round) {
    const Point& base = trace.round_points.back();
    Point batch_grad = zeros(n);
    for (int r = 1; r <= params.batch; ++r) {
      int t = (round - 1) * params.batch + r;
      Point u = sample_sphere(plays_src, n);
      Point play = base;
      axpy_in_place(play, delta, u);
      double f_val = queried[static_cast<std::size_t>(t - 1)].value(play);
      ++trace.loss_queries;
      if (!std::isfinite(f_val)) {
        throw std::runtime_error("bandit::run: loss oracle returned non-finite value at t=" +
                                 std::to_string(t));
      }
      axpy_in_place(batch_grad, (n / delta) * f_val, u);
      trace.played.push_back(std::move(play));
      trace.losses.push_back(f_val);
      cumulative += f_val;
      trace.cumulative.push_back(cumulative);
    }
    Point release = agg.add_and_release(batch_grad, round);
    trace.batch_gradients.push_back(std::move(batch_grad));

    // Response from the stale sum s~_{R-1}.
    const Point& stale = trace.releases.back();
    fw::CgResult step = fw::solve(domain, scaled(stale, -params.eta), params.batch);
    trace.lmo_calls_rounds += params.batch;
    trace.lmo_calls_total += params.batch;
    trace.round_points.push_back(step.point);
    trace.releases.push_back(std::move(release));
  }
  trace.noise_vector_draws = agg.noise_vector_draws();
  return trace;
}

}  // namespace pfb::bandit
