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

#include "pfbandit/noisy_oco.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "pfbandit/random.hpp"
#include "support/oracles.hpp"

using namespace pfb;
using Catch::Approx;

TEST_CASE("exact mirror map is the Euclidean projection") {
  auto ball = DecisionSet::l2_ball(2, 1.0);
  Point p = oco::exact_mirror_map(ball, {3.0, 4.0}, 1);
  CHECK(p[0] == Approx(0.6));
  CHECK(p[1] == Approx(0.8));
  Point inside{0.2, -0.3};
  CHECK(oco::exact_mirror_map(ball, inside, 1) == inside);

  auto simplex = DecisionSet::simplex(3);
  Point q = oco::exact_mirror_map(simplex, {0.5, 0.5, 0.5}, 100000);
  for (double c : q) CHECK(c == Approx(1.0 / 3.0).margin(0.02));
  Point oracle = pfb::testing::simplex_projection({0.5, 0.5, 0.5});
  CHECK(distance(q, oracle) < 0.02);

  Point on_simplex{0.2, 0.5, 0.3};
  Point fixed = oco::exact_mirror_map(simplex, on_simplex, 100000);
  CHECK(distance(fixed, on_simplex) < 0.02);
}

TEST_CASE("Fenchel-Young inequality") {
  RandomSource src(41);
  auto ball = DecisionSet::l2_ball(3, 1.0);
  for (int rep = 0; rep < 1000; ++rep) {
    Point x = pfb::testing::random_feasible(ball, src);
    Point y(3);
    for (double& c : y) c = 3.0 * src.gaussian();
    Point xhat = oco::exact_mirror_map(ball, y, 1);  // closed form, exact
    double conj = dot(y, xhat) - 0.5 * dot(xhat, xhat);
    CHECK(dot(x, y) <= 0.5 * dot(x, x) + conj + 1e-9);
  }
  // Approximate map: allow the CG gap as slack.
  auto simplex = DecisionSet::simplex(3);
  const int k_cg = 2000;
  const double slack = 10.0 * 2.0 / k_cg;
  for (int rep = 0; rep < 200; ++rep) {
    Point x = pfb::testing::random_feasible(simplex, src);
    Point y(3);
    for (double& c : y) c = 2.0 * src.gaussian();
    Point xhat = oco::exact_mirror_map(simplex, y, k_cg);
    double conj = dot(y, xhat) - 0.5 * dot(xhat, xhat);
    CHECK(dot(x, y) <= 0.5 * dot(x, x) + conj + slack + 1e-9);
  }
}

namespace {

oco::NoisyMapOracle exact_map(const DecisionSet& domain) {
  return {[&domain](const Point& g) { return oco::exact_mirror_map(domain, g, 1); }, 0.0};
}

}  // namespace

TEST_CASE("zero gradients keep the iterate at the map of zero") {
  auto ball = DecisionSet::l2_ball(2, 1.0);
  oco::NoisyGradOracle grad{[](int, const Point&) { return zeros(2); }, 1.0};
  auto trace = oco::run(16, 2, 1.0, grad, exact_map(ball),
                        [](int, const Point&) { return 0.0; });
  Point rest = oco::exact_mirror_map(ball, zeros(2), 1);
  for (const auto& x : trace.iterates) CHECK(x == rest);
  for (double l : trace.losses) CHECK(l == 0.0);
}

TEST_CASE("horizon one runs a single map and grad call") {
  auto ball = DecisionSet::l2_ball(2, 1.0);
  int map_calls = 0, grad_calls = 0;
  oco::NoisyMapOracle map{[&](const Point& g) {
                            ++map_calls;
                            return oco::exact_mirror_map(ball, g, 1);
                          },
                          0.0};
  oco::NoisyGradOracle grad{[&](int, const Point&) {
                              ++grad_calls;
                              return Point{1.0, 2.0};
                            },
                            3.0};
  auto trace = oco::run(1, 2, 1.0, grad, map, [](int, const Point&) { return 0.0; });
  CHECK(map_calls == 1);
  CHECK(grad_calls == 1);
  REQUIRE(trace.dual_sums.size() == 2);
  CHECK(trace.dual_sums[1] == Point{1.0, 2.0});
}

TEST_CASE("repeated linear loss drives iterates to the facing boundary point") {
  auto ball = DecisionSet::l2_ball(2, 1.0);
  Point c{0.6, -0.8};
  oco::NoisyGradOracle grad{[&](int, const Point&) { return c; }, 1.0};
  auto trace = oco::run(500, 2, std::sqrt(0.5), grad, exact_map(ball),
                        [&](int, const Point& x) { return dot(c, x); });
  Point target = scaled(c, -1.0);
  CHECK(distance(trace.iterates.back(), target) < 1e-6);
}

TEST_CASE("dual sums accumulate the returned gradients exactly") {
  auto ball = DecisionSet::l2_ball(3, 1.0);
  RandomSource src(42);
  oco::NoisyGradOracle grad{[&](int, const Point&) {
                              Point g(3);
                              for (double& v : g) v = src.gaussian();
                              return g;
                            },
                            2.0};
  auto trace = oco::run(64, 3, 1.0, grad, exact_map(ball),
                        [](int, const Point&) { return 0.0; });
  Point sum = zeros(3);
  for (const auto& g : trace.grads) add_in_place(sum, g);
  CHECK(sum == trace.dual_sums.back());
}

TEST_CASE("regret bound closed form") {
  CHECK(oco::regret_bound(100, 1.0, 0.0, 1.0) == Approx(25.0));
  double b1 = oco::regret_bound(256, 2.0, 0.0, 1.5);
  double b2 = oco::regret_bound(512, 2.0, 0.0, 1.5);
  CHECK(b2 / b1 == Approx(std::sqrt(2.0)));
  double gamma = 0.5;
  CHECK(oco::regret_bound(256, 2.0, gamma, 1.5) - b1 == Approx(256 * 2.0 * gamma));
  // The gamma term dominates once gamma >> d_omega / sqrt(T).
  CHECK(oco::regret_bound(10000, 1.0, 1.0, 1.0) > 0.5 * 10000 * 1.0 * 1.0);
}

TEST_CASE("measured regret stays under the bound with stochastic gradients") {
  auto ball = DecisionSet::l2_ball(3, 1.0);
  Point c = scaled(Point{2.0, -1.0, 2.0}, 1.0 / 3.0);  // unit norm
  const double noise_level = 0.5;
  const double kappa = std::sqrt(1.0 + noise_level * noise_level);
  const double d_omega = std::sqrt(0.5);

  for (int horizon : {64, 256, 1024}) {
    double mean_regret = 0.0;
    const int n_seeds = 20;
    for (int s = 0; s < n_seeds; ++s) {
      RandomSource src(derive_seed(900 + s, "oco-bound"));
      oco::NoisyGradOracle grad{[&](int, const Point&) {
                                  Point g = c;
                                  axpy_in_place(g, noise_level, sample_sphere(src, 3));
                                  return g;
                                },
                                kappa};
      auto trace = oco::run(horizon, 3, d_omega, grad, exact_map(ball),
                            [&](int, const Point& x) { return dot(c, x); });
      double played = 0.0;
      for (double l : trace.losses) played += l;
      double comparator = -static_cast<double>(horizon);  // min over the ball of T<c,x>
      mean_regret += played - comparator;
    }
    mean_regret /= n_seeds;
    CHECK(mean_regret <= oco::regret_bound(horizon, kappa, 0.0, d_omega));
  }
}
