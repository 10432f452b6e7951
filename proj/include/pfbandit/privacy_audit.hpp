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
#include <stdexcept>
#include <string>
#include <vector>

#include "pfbandit/private_bandit.hpp"
#include "pfbandit/random.hpp"
#include "pfbandit/tree_agg.hpp"
#include "pfbandit/vec.hpp"

namespace pfb::audit {

struct L1Sensitivity {
  double first_principles = 0.0;  // T_b * sqrt(n) * M_F
  double paper_displayed = 0.0;   // T^{1/2} * n * L
};

// Both readings of the l1 bound on one tree element; the schedule calibrates
// from the larger first-principles product.
inline L1Sensitivity sensitivity_l1(const bandit::BanditParams& p) {
  L1Sensitivity out;
  out.first_principles = p.batch * std::sqrt(static_cast<double>(p.dim)) *
                         bandit::per_term_scalar_bound(p);
  out.paper_displayed = std::sqrt(static_cast<double>(p.horizon)) * p.dim * p.lipschitz;
  return out;
}

// High-probability l2 bound on a batch gradient, conservative variant
// Delta = sqrt(T_b) * M_F.
inline double sensitivity_l2_highprob(const bandit::BanditParams& p, double delta0) {
  return bandit::detail::l2_sensitivity_highprob(p, delta0, /*conservative=*/true);
}

// Per-entry variant Delta = M_F, as displayed in the source derivation.
inline double sensitivity_l2_highprob_paper(const bandit::BanditParams& p, double delta0) {
  return bandit::detail::l2_sensitivity_highprob(p, delta0, /*conservative=*/false);
}

struct CalibrationReport {
  bandit::PrivacyMode regime = bandit::PrivacyMode::kNone;
  double epsilon = 0.0;
  double delta = 0.0;

  // Pure regime.
  double y1_first_principles = 0.0;
  double y1_paper_displayed = 0.0;
  double lambda_chosen = 0.0;
  double lambda_paper = 0.0;

  // Approx regime.
  double delta0 = 0.0;  // per-batch failure probability, delta / (2 sqrt(T))
  double y2_conservative = 0.0;
  double y2_paper_variant = 0.0;
  double sigma_chosen = 0.0;
  double sigma_derived = 0.0;
  double sigma_paper = 0.0;

  bool discrepancy_flag = false;
  std::string log_convention = "natural";
};

// Assembles derived and displayed noise scales for the params' regime and
// confirms the schedule chose the conservative value.
inline CalibrationReport calibration_report(const bandit::BanditParams& p, double delta = 0.0) {
  CalibrationReport rep;
  rep.regime = p.privacy.mode;
  rep.epsilon = p.privacy.epsilon;
  switch (p.privacy.mode) {
    case bandit::PrivacyMode::kNone:
      break;
    case bandit::PrivacyMode::kPure: {
      L1Sensitivity y1 = sensitivity_l1(p);
      rep.y1_first_principles = y1.first_principles;
      rep.y1_paper_displayed = y1.paper_displayed;
      rep.lambda_chosen = tree::calibrate_laplace(y1.first_principles, p.horizon, rep.epsilon);
      rep.lambda_paper = tree::calibrate_laplace(y1.paper_displayed, p.horizon, rep.epsilon);
      rep.discrepancy_flag = rep.lambda_chosen != rep.lambda_paper;
      if (p.noise.kind == NoiseKind::kLaplace &&
          p.noise.scale + 1e-12 < std::max(rep.lambda_chosen, rep.lambda_paper)) {
        throw std::runtime_error("calibration_report: schedule noise below calibration");
      }
      break;
    }
    case bandit::PrivacyMode::kApprox: {
      rep.delta = delta > 0.0 ? delta : p.privacy.delta;
      rep.delta0 = rep.delta / (2.0 * std::sqrt(static_cast<double>(p.horizon)));
      rep.y2_conservative = sensitivity_l2_highprob(p, rep.delta0);
      rep.y2_paper_variant = sensitivity_l2_highprob_paper(p, rep.delta0);
      rep.sigma_derived = bandit::detail::gaussian_scale_derived(p, rep.epsilon, rep.delta);
      rep.sigma_paper = bandit::detail::gaussian_scale_displayed(
          p.horizon, p.dim, p.lipschitz, rep.epsilon, rep.delta);
      rep.sigma_chosen = std::max(rep.sigma_derived, rep.sigma_paper);
      rep.discrepancy_flag = rep.sigma_derived != rep.sigma_paper;
      if (p.noise.kind == NoiseKind::kGaussian &&
          p.noise.scale + 1e-12 < rep.sigma_chosen) {
        throw std::runtime_error("calibration_report: schedule noise below calibration");
      }
      break;
    }
  }
  return rep;
}

struct EmpiricalDpResult {
  double eps_hat = 0.0;
  double lambda = 0.0;
  int bins = 0;
  long long min_bin_count = 0;
  long long trials = 0;
};

// Single-release likelihood-ratio test on the scalar Laplace tree mechanism:
// two neighboring streams differing by y1 in one element, the final prefix
// release histogrammed into equal-probability bins from the pooled sample,
// eps_hat = max |ln(p/p')| over bins with >= 100 samples on both sides.
// Bins widen (50 -> 25 -> 10 -> 5) until the count floor is met.
inline EmpiricalDpResult empirical_dp_test(int horizon, double eps, double y1,
                                           long long trials, const RandomSource& src) {
  if (horizon < 2 || horizon > 16) {
    throw std::invalid_argument("empirical_dp_test: need 2 <= T <= 16");
  }
  if (trials < 100000) throw std::invalid_argument("empirical_dp_test: trials must be >= 1e5");
  if (!(y1 >= 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("empirical_dp_test: need y1 >= 0, eps > 0");
  }

  EmpiricalDpResult out;
  out.trials = trials;
  out.lambda = y1 > 0.0 ? tree::calibrate_laplace(y1, horizon, eps)
                        : tree::calibrate_laplace(1.0, horizon, eps);
  NoiseSpec noise = NoiseSpec::laplace(out.lambda, 1);

  auto final_release = [&](bool neighbor, long long trial) {
    // Common random numbers across the two streams: same trial, same child.
    RandomSource child = src.fork("dp-test/trial/" + std::to_string(trial));
    tree::TreeAggregator agg(horizon, 1, noise, std::move(child));
    Point release;
    for (int t = 1; t <= horizon; ++t) {
      Point item{t == 1 && neighbor ? y1 : 0.0};
      release = agg.add_and_release(item, t);
    }
    return release[0];
  };

  std::vector<double> a(static_cast<std::size_t>(trials));
  std::vector<double> b(static_cast<std::size_t>(trials));
  for (long long i = 0; i < trials; ++i) {
    a[static_cast<std::size_t>(i)] = final_release(false, i);
    b[static_cast<std::size_t>(i)] = final_release(true, i);
  }

  std::vector<double> pooled;
  pooled.reserve(a.size() + b.size());
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());

  for (int bins : {50, 25, 10, 5}) {
    std::vector<double> edges;
    for (int e = 1; e < bins; ++e) {
      edges.push_back(pooled[pooled.size() * static_cast<std::size_t>(e) / static_cast<std::size_t>(bins)]);
    }
    auto histogram = [&](const std::vector<double>& xs) {
      std::vector<long long> counts(static_cast<std::size_t>(bins), 0);
      for (double x : xs) {
        std::size_t bin = static_cast<std::size_t>(
            std::lower_bound(edges.begin(), edges.end(), x) - edges.begin());
        ++counts[bin];
      }
      return counts;
    };
    std::vector<long long> ca = histogram(a);
    std::vector<long long> cb = histogram(b);

    double eps_hat = 0.0;
    long long min_count = trials;
    bool any = false;
    for (int i = 0; i < bins; ++i) {
      auto ia = ca[static_cast<std::size_t>(i)];
      auto ib = cb[static_cast<std::size_t>(i)];
      if (ia >= 100 && ib >= 100) {
        any = true;
        min_count = std::min({min_count, ia, ib});
        eps_hat = std::max(eps_hat, std::abs(std::log(static_cast<double>(ia) /
                                                      static_cast<double>(ib))));
      }
    }
    if (any) {
      out.eps_hat = eps_hat;
      out.bins = bins;
      out.min_bin_count = min_count;
      return out;
    }
  }
  throw std::runtime_error("empirical_dp_test: no bin met the 100-sample floor");
}

// Structural audit of the tree mechanism on a zero stream: checks that every
// release decomposes into exactly ceil(log2 T) noise vectors and, for Zero
// noise, that releases are exact prefix sums.
struct NoiseCountCheck {
  bool passed = false;
  int levels = 0;
  std::uint64_t total_draws = 0;
  std::string detail;
};

inline NoiseCountCheck noise_count_check(int horizon, int dim, const NoiseSpec& noise,
                                         const RandomSource& src) {
  NoiseCountCheck out;
  tree::TreeAggregator agg(horizon, dim, noise, src.fork("audit/noise-count"));
  out.levels = agg.levels();
  Point item = zeros(dim);
  bool ok = true;
  for (int t = 1; t <= horizon; ++t) {
    Point rel = agg.add_and_release(item, t);
    const auto& st = agg.release_stats().back();
    if (horizon > 1 && st.stored_nodes + st.fresh_draws != agg.levels()) {
      ok = false;
      out.detail = "release " + std::to_string(t) + " decomposed into " +
                   std::to_string(st.stored_nodes + st.fresh_draws) + " != " +
                   std::to_string(agg.levels()) + " noise vectors";
      break;
    }
    if (noise.kind == NoiseKind::kZero && norm(rel) != 0.0) {
      ok = false;
      out.detail = "zero-noise release of a zero stream was nonzero";
      break;
    }
  }
  out.total_draws = agg.noise_vector_draws();
  out.passed = ok;
  if (ok) out.detail = "all releases decomposed into exactly ceil(log2 T) noise vectors";
  return out;
}

}  // namespace pfb::audit
