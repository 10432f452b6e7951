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

// Experiment runner: single runs, T-grid sweeps with exponent fitting, and
// audit suites, driven by a JSON config. See configs/ for ready-made inputs.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfbandit/config.hpp"
#include "pfbandit/pfbandit.hpp"
#include "pfbandit/serialize.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> out_override;
};

pfb::cli::ExperimentConfig load_config(const CommonArgs& args) {
  std::ifstream in(args.config_path);
  if (!in) throw std::runtime_error("cannot open config: " + args.config_path);
  json j = json::parse(in);
  pfb::cli::ExperimentConfig cfg = pfb::cli::parse_config(j);
  if (args.seed_override) cfg.master_seed = *args.seed_override;
  if (args.out_override) cfg.output_dir = *args.out_override;
  return cfg;
}

const pfb::bench::Adversary& require_adversary(const pfb::cli::ExperimentConfig& cfg) {
  if (!cfg.adversary) throw std::runtime_error("config needs an adversary for this command");
  return *cfg.adversary;
}

struct SingleRunResult {
  pfb::bandit::RegretTrace trace;
  pfb::bench::ComparatorResult comparator;
  double regret = 0.0;
};

SingleRunResult execute(const pfb::cli::ExperimentConfig& cfg, int horizon,
                        std::uint64_t seed) {
  pfb::bandit::BanditParams params =
      pfb::bandit::schedule(horizon, cfg.domain.dimension(), cfg.lipschitz,
                            cfg.domain.diameter(), cfg.privacy, cfg.feasibility);
  const auto& adversary = require_adversary(cfg);
  std::vector<pfb::LossOracle> losses = adversary.make_losses(horizon);
  SingleRunResult out;
  out.trace = pfb::bandit::run(cfg.domain, losses, params, pfb::RandomSource(seed));
  out.comparator =
      pfb::bench::comparator_loss(adversary, cfg.domain, horizon, cfg.comparator_cg);
  pfb::bench::attach_comparator(out.trace, adversary, out.comparator);
  out.regret = pfb::bench::regret(out.trace, out.comparator.value);
  return out;
}

int run_single(const pfb::cli::ExperimentConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  SingleRunResult res = execute(cfg, cfg.horizon, cfg.master_seed);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json summary;
  summary["requested_T"] = cfg.requested_horizon;
  summary["T"] = cfg.horizon;
  summary["seed"] = cfg.master_seed;
  summary["params"] = pfb::io::params_to_json(res.trace.params);
  summary["final_regret"] = res.regret;
  summary["comparator"] = {{"value", res.comparator.value},
                           {"gap_certificate", res.comparator.gap_certificate}};
  if (cfg.privacy.mode != pfb::bandit::PrivacyMode::kNone) {
    summary["calibration"] =
        pfb::io::calibration_to_json(pfb::audit::calibration_report(res.trace.params));
  }
  summary["loss_queries"] = res.trace.loss_queries;
  summary["noise_vector_draws"] = res.trace.noise_vector_draws;
  summary["wall_time_seconds"] = wall;

  std::filesystem::path dir(cfg.output_dir);
  pfb::io::write_file_atomic(dir / "trace.csv", pfb::io::trace_to_csv(res.trace));
  pfb::io::write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "run: T=" << cfg.horizon << " seed=" << cfg.master_seed
            << " regret=" << res.regret << " -> " << (dir / "trace.csv").string() << "\n";
  return 0;
}

int run_sweep(const pfb::cli::ExperimentConfig& cfg) {
  if (cfg.sweep_grid.empty()) throw std::runtime_error("config needs a sweep_T grid");
  require_adversary(cfg);

  std::vector<int> grid;
  for (int t : cfg.sweep_grid) grid.push_back(pfb::cli::round_to_perfect_square(t));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.size() < 4) {
    throw std::runtime_error("sweep needs >= 4 distinct horizons for the exponent fit; got " +
                             std::to_string(grid.size()));
  }
  const int seeds = cfg.seed_count;

  // Precompute all (T, seed) regrets in parallel; each run owns a seed
  // derived from (master, experiment index), so scheduling cannot matter.
  std::vector<std::vector<double>> table(grid.size(),
                                         std::vector<double>(static_cast<std::size_t>(seeds)));
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<std::size_t, int>> jobs;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int s = 0; s < seeds; ++s) jobs.emplace_back(i, s);
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      auto [i, s] = jobs[idx];
      long long index = static_cast<long long>(i) * seeds + s;
      std::uint64_t seed =
          pfb::derive_seed(cfg.master_seed, "experiment/" + std::to_string(index));
      table[i][static_cast<std::size_t>(s)] =
          execute(cfg, grid[i], seed).regret;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w + 1 < workers && w + 1 < jobs.size(); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  auto runner = [&](int horizon, int seed_index) {
    auto it = std::find(grid.begin(), grid.end(), horizon);
    return table[static_cast<std::size_t>(it - grid.begin())][static_cast<std::size_t>(seed_index)];
  };
  pfb::bench::ExponentFit fit = pfb::bench::fit_exponent(
      grid, runner, seeds, pfb::RandomSource(cfg.master_seed).fork("sweep/fit"));

  std::string csv = "T,mean_regret,stderr\n";
  for (std::size_t i = 0; i < fit.grid.size(); ++i) {
    csv += std::to_string(fit.grid[i]) + "," + pfb::io::fmt17(fit.mean_regrets[i]) + "," +
           pfb::io::fmt17(fit.std_errors[i]) + "\n";
  }
  json fj = pfb::io::fit_to_json(fit);
  fj["seeds"] = seeds;
  fj["requested_grid"] = cfg.sweep_grid;

  std::filesystem::path dir(cfg.output_dir);
  pfb::io::write_file_atomic(dir / "sweep.csv", csv);
  pfb::io::write_file_atomic(dir / "fit.json", fj.dump(2) + "\n");

  std::cout << "sweep: " << fit.grid.size() << " horizons x " << seeds
            << " seeds, slope=" << fit.slope << " +/- " << fit.half_width << " -> "
            << (dir / "fit.json").string() << "\n";
  return 0;
}

int run_audit(const pfb::cli::ExperimentConfig& cfg) {
  pfb::bandit::BanditParams params = cfg.make_params();
  pfb::RandomSource src(cfg.master_seed);

  json out;
  bool all_passed = true;

  out["calibration"] = pfb::io::calibration_to_json(pfb::audit::calibration_report(params));

  {
    const double delta = 0.1;
    const int trials = 1000;
    double rate = pfb::bench::concentration_check(params.dim, params.batch, delta, 1.0,
                                                  trials, src.fork("audit/concentration"));
    bool passed = rate <= delta;
    all_passed = all_passed && passed;
    out["checks"]["concentration"] = {{"n", params.dim}, {"k", params.batch},
                                      {"delta", delta},  {"trials", trials},
                                      {"violation_rate", rate}, {"passed", passed}};
  }

  {
    pfb::audit::NoiseCountCheck check = pfb::audit::noise_count_check(
        std::max(params.rounds, 2), params.dim, params.noise, src);
    all_passed = all_passed && check.passed;
    out["checks"]["noise_count"] = {{"levels", check.levels},
                                    {"noise_vector_draws", check.total_draws},
                                    {"passed", check.passed},
                                    {"detail", check.detail}};
  }

  if (cfg.privacy.mode == pfb::bandit::PrivacyMode::kPure) {
    const int dp_horizon = 8;
    pfb::audit::EmpiricalDpResult dp = pfb::audit::empirical_dp_test(
        dp_horizon, cfg.privacy.epsilon, 1.0, cfg.audit_dp_trials, src.fork("audit/dp"));
    bool passed = dp.eps_hat <= cfg.privacy.epsilon + 0.1;
    all_passed = all_passed && passed;
    out["checks"]["empirical_dp"] = {{"T", dp_horizon},
                                     {"epsilon", cfg.privacy.epsilon},
                                     {"trials", dp.trials},
                                     {"lambda", dp.lambda},
                                     {"eps_hat", dp.eps_hat},
                                     {"bins", dp.bins},
                                     {"min_bin_count", dp.min_bin_count},
                                     {"passed", passed}};
  }

  out["all_passed"] = all_passed;
  std::filesystem::path dir(cfg.output_dir);
  pfb::io::write_file_atomic(dir / "audit.json", out.dump(2) + "\n");

  std::cout << "audit: " << (all_passed ? "all checks passed" : "CHECK FAILED") << " -> "
            << (dir / "audit.json").string() << "\n";
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projection-free private bandit optimization benchmark runner"};
  app.require_subcommand(1);

  CommonArgs args;
  for (auto* sub : {app.add_subcommand("run", "single experiment: trace.csv + summary.json"),
                    app.add_subcommand("sweep", "T-grid sweep: sweep.csv + fit.json"),
                    app.add_subcommand("audit", "calibration + structural checks: audit.json")}) {
    sub->add_option("--config", args.config_path, "JSON experiment config")->required();
    sub->add_option("--seed", args.seed_override, "master seed override");
    sub->add_option("--out", args.out_override, "output directory override");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    pfb::cli::ExperimentConfig cfg = load_config(args);
    if (app.got_subcommand("run")) return run_single(cfg);
    if (app.got_subcommand("sweep")) return run_sweep(cfg);
    return run_audit(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
