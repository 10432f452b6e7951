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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pfbandit/bench.hpp"
#include "pfbandit/geometry.hpp"
#include "pfbandit/private_bandit.hpp"

namespace pfb::cli {

inline int round_to_perfect_square(int requested) {
  if (requested < 1) throw std::invalid_argument("T must be >= 1");
  int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(requested))));
  while ((r + 1) * (r + 1) <= requested) ++r;
  while (r * r > requested) --r;
  return r * r;
}

// One experiment: domain + adversary + schedule inputs + seed fan-out.
struct ExperimentConfig {
  DecisionSet domain = DecisionSet::l2_ball(1, 1.0);
  std::optional<bench::Adversary> adversary;
  int requested_horizon = 0;
  int horizon = 0;  // rounded down to a perfect square
  double lipschitz = 1.0;
  bandit::PrivacySpec privacy;
  bandit::FeasibilityMode feasibility = bandit::FeasibilityMode::kEnlargedDomain;
  std::uint64_t master_seed = 0;
  int seed_count = 1;
  std::vector<int> sweep_grid;          // requested values; rounded per entry
  std::string output_dir = "out";
  int comparator_cg = 100000;
  long long audit_dp_trials = 100000;

  bandit::BanditParams make_params() const {
    return bandit::schedule(horizon, domain.dimension(), lipschitz,
                            domain.diameter(), privacy, feasibility);
  }
};

inline DecisionSet parse_domain(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "simplex") return DecisionSet::simplex(j.at("dimension").get<int>());
  if (kind == "hypercube") {
    return DecisionSet::hypercube(j.at("dimension").get<int>(), j.at("side").get<double>());
  }
  if (kind == "l1_ball") {
    return DecisionSet::l1_ball(j.at("dimension").get<int>(), j.at("radius").get<double>());
  }
  if (kind == "l2_ball") {
    return DecisionSet::l2_ball(j.at("dimension").get<int>(), j.at("radius").get<double>());
  }
  if (kind == "partition_matroid") {
    return DecisionSet::partition_matroid(j.at("part_sizes").get<std::vector<int>>(),
                                          j.at("ranks").get<std::vector<int>>());
  }
  throw std::invalid_argument("unknown domain kind: " + kind);
}

inline bench::Adversary parse_adversary(const nlohmann::json& j, const DecisionSet& domain,
                                        double lipschitz) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "fixed_linear") {
    return bench::Adversary::fixed_linear(domain, j.at("direction").get<Point>(), lipschitz);
  }
  if (kind == "rotating_linear") {
    return bench::Adversary::rotating_linear(domain,
                                             j.at("directions").get<std::vector<Point>>(),
                                             j.value("period", 1), lipschitz);
  }
  if (kind == "quadratic") {
    return bench::Adversary::quadratic(domain, j.at("centers").get<std::vector<Point>>(),
                                       lipschitz);
  }
  throw std::invalid_argument("unknown adversary kind: " + kind);
}

inline bandit::PrivacySpec parse_privacy(const nlohmann::json& j) {
  if (j.is_null()) return bandit::PrivacySpec::none();
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "none") return bandit::PrivacySpec::none();
  if (mode == "pure") return bandit::PrivacySpec::pure(j.at("epsilon").get<double>());
  if (mode == "approx") {
    return bandit::PrivacySpec::approx(j.at("epsilon").get<double>(),
                                       j.at("delta").get<double>());
  }
  throw std::invalid_argument("unknown privacy mode: " + mode);
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.domain = parse_domain(j.at("domain"));
  cfg.lipschitz = j.value("lipschitz", 1.0);
  if (!(cfg.lipschitz > 0.0)) throw std::invalid_argument("lipschitz must be > 0");
  cfg.requested_horizon = j.at("T").get<int>();
  cfg.horizon = round_to_perfect_square(cfg.requested_horizon);
  if (j.contains("adversary")) {
    cfg.adversary = parse_adversary(j.at("adversary"), cfg.domain, cfg.lipschitz);
  }
  if (j.contains("privacy")) cfg.privacy = parse_privacy(j.at("privacy"));
  const std::string feas = j.value("feasibility_mode", std::string("enlarged_domain"));
  if (feas == "enlarged_domain") {
    cfg.feasibility = bandit::FeasibilityMode::kEnlargedDomain;
  } else if (feas == "shrink_wrap") {
    cfg.feasibility = bandit::FeasibilityMode::kShrinkWrap;
  } else {
    throw std::invalid_argument("unknown feasibility_mode: " + feas);
  }
  if (j.contains("seeds")) {
    cfg.master_seed = j.at("seeds").value("master", 0ULL);
    cfg.seed_count = j.at("seeds").value("count", 1);
    if (cfg.seed_count < 1) throw std::invalid_argument("seeds.count must be >= 1");
  }
  if (j.contains("sweep_T")) cfg.sweep_grid = j.at("sweep_T").get<std::vector<int>>();
  cfg.output_dir = j.value("output_dir", std::string("out"));
  cfg.comparator_cg = j.value("comparator_cg", 100000);
  cfg.audit_dp_trials = j.value("audit_dp_trials", 100000LL);
  return cfg;
}

}  // namespace pfb::cli
