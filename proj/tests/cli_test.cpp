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

// End-to-end checks of the pfbandit binary: file contracts, determinism,
// rounding, and failure modes.

#include <catch2/catch_amalgamated.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pfbandit/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Catch::Approx;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("pfbandit_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
};

int run_cli(const std::string& args) {
  std::string cmd = std::string(PFBANDIT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path write_config(const TempDir& dir, const json& j, const std::string& name = "cfg.json") {
  fs::path p = dir.path / name;
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_config(const TempDir& dir) {
  json j;
  j["domain"] = {{"kind", "l2_ball"}, {"dimension", 2}, {"radius", 1.0}};
  j["adversary"] = {{"kind", "fixed_linear"}, {"direction", {1.0, 0.0}}};
  j["T"] = 16;
  j["lipschitz"] = 1.0;
  j["privacy"] = {{"mode", "none"}};
  j["seeds"] = {{"master", 42}, {"count", 1}};
  j["output_dir"] = (dir.path / "out").string();
  return j;
}

}  // namespace

TEST_CASE("config parsing rounds the horizon down to a perfect square") {
  CHECK(pfb::cli::round_to_perfect_square(300) == 289);
  CHECK(pfb::cli::round_to_perfect_square(16) == 16);
  CHECK(pfb::cli::round_to_perfect_square(1) == 1);
  CHECK(pfb::cli::round_to_perfect_square(99) == 81);
  CHECK_THROWS_AS(pfb::cli::round_to_perfect_square(0), std::invalid_argument);

  json j;
  j["domain"] = {{"kind", "simplex"}, {"dimension", 3}};
  j["T"] = 300;
  auto cfg = pfb::cli::parse_config(j);
  CHECK(cfg.horizon == 289);
  CHECK(cfg.requested_horizon == 300);
  CHECK(cfg.domain.kind() == pfb::SetKind::kSimplex);
}

TEST_CASE("run writes a trace with one row per step") {
  TempDir dir;
  auto cfg = write_config(dir, base_config(dir));
  REQUIRE(run_cli("run --config " + cfg.string()) == 0);

  std::string trace = slurp(dir.path / "out" / "trace.csv");
  int rows = static_cast<int>(std::count(trace.begin(), trace.end(), '\n'));
  CHECK(rows == 17);  // header + 16 steps
  CHECK(trace.rfind("t,round,loss,cumulative_loss,cumulative_regret\n", 0) == 0);

  json summary = json::parse(slurp(dir.path / "out" / "summary.json"));
  CHECK(summary["T"] == 16);
  CHECK(summary["params"]["batch"] == 4);
  CHECK(summary["final_regret"].is_number());
  CHECK(summary["comparator"]["value"].is_number());
  CHECK(summary["wall_time_seconds"].is_number());
}

TEST_CASE("identical config and seed reproduce the trace byte for byte") {
  TempDir dir;
  json j = base_config(dir);
  auto cfg = write_config(dir, j);
  REQUIRE(run_cli("run --config " + cfg.string()) == 0);
  std::string first = slurp(dir.path / "out" / "trace.csv");
  json first_summary = json::parse(slurp(dir.path / "out" / "summary.json"));
  REQUIRE(run_cli("run --config " + cfg.string()) == 0);
  std::string second = slurp(dir.path / "out" / "trace.csv");
  json second_summary = json::parse(slurp(dir.path / "out" / "summary.json"));

  CHECK(first == second);
  // summary matches except the wall clock.
  first_summary.erase("wall_time_seconds");
  second_summary.erase("wall_time_seconds");
  CHECK(first_summary == second_summary);

  // A different seed changes the trace.
  REQUIRE(run_cli("run --config " + cfg.string() + " --seed 43") == 0);
  CHECK(slurp(dir.path / "out" / "trace.csv") != first);
}

TEST_CASE("requested horizon rounding is reported") {
  TempDir dir;
  json j = base_config(dir);
  j["T"] = 300;
  auto cfg = write_config(dir, j);
  REQUIRE(run_cli("run --config " + cfg.string()) == 0);
  json summary = json::parse(slurp(dir.path / "out" / "summary.json"));
  CHECK(summary["requested_T"] == 300);
  CHECK(summary["T"] == 289);
}

TEST_CASE("invalid config exits nonzero without partial files") {
  TempDir dir;
  json j = base_config(dir);
  j["domain"]["kind"] = "dodecahedron";
  auto cfg = write_config(dir, j);
  CHECK(run_cli("run --config " + cfg.string()) != 0);
  CHECK(!fs::exists(dir.path / "out" / "trace.csv"));
  CHECK(!fs::exists(dir.path / "out" / "summary.json"));

  CHECK(run_cli("run --config " + (dir.path / "missing.json").string()) != 0);
}

TEST_CASE("sweep emits csv rows and a fit") {
  TempDir dir;
  json j = base_config(dir);
  j["seeds"]["count"] = 10;
  j["sweep_T"] = {16, 25, 36, 49};
  auto cfg = write_config(dir, j);
  REQUIRE(run_cli("sweep --config " + cfg.string()) == 0);

  std::string csv = slurp(dir.path / "out" / "sweep.csv");
  CHECK(static_cast<int>(std::count(csv.begin(), csv.end(), '\n')) == 5);
  CHECK(csv.rfind("T,mean_regret,stderr\n", 0) == 0);

  json fit = json::parse(slurp(dir.path / "out" / "fit.json"));
  CHECK(fit["slope"].is_number());
  CHECK(fit["half_width"].is_number());
  CHECK(fit["grid"].size() == 4);
}

TEST_CASE("sweep refuses a degenerate grid") {
  TempDir dir;
  json j = base_config(dir);
  j["seeds"]["count"] = 10;
  j["sweep_T"] = {16};
  auto cfg = write_config(dir, j);
  CHECK(run_cli("sweep --config " + cfg.string()) != 0);
  CHECK(!fs::exists(dir.path / "out" / "fit.json"));
}

TEST_CASE("audit of a zero-noise config") {
  TempDir dir;
  json j = base_config(dir);
  j["T"] = 64;
  auto cfg = write_config(dir, j);
  REQUIRE(run_cli("audit --config " + cfg.string()) == 0);
  json audit = json::parse(slurp(dir.path / "out" / "audit.json"));
  CHECK(audit["all_passed"] == true);
  CHECK(audit["checks"]["noise_count"]["noise_vector_draws"] == 0);
  CHECK(audit["checks"]["noise_count"]["passed"] == true);
  CHECK(audit["checks"]["concentration"]["passed"] == true);
  CHECK(audit["calibration"]["regime"] == "none");
  CHECK(!audit["checks"].contains("empirical_dp"));
}

TEST_CASE("audit of a pure-DP config carries both lambda variants") {
  TempDir dir;
  json j = base_config(dir);
  j["T"] = 256;
  j["domain"] = {{"kind", "l2_ball"}, {"dimension", 4}, {"radius", 0.5}};
  j["adversary"] = {{"kind", "fixed_linear"}, {"direction", {1.0, 0.0, 0.0, 0.0}}};
  j["privacy"] = {{"mode", "pure"}, {"epsilon", 1.0}};
  j["audit_dp_trials"] = 100000;
  auto cfg = write_config(dir, j);
  REQUIRE(run_cli("audit --config " + cfg.string()) == 0);
  json audit = json::parse(slurp(dir.path / "out" / "audit.json"));
  CHECK(audit["calibration"]["regime"] == "pure");
  CHECK(audit["calibration"]["discrepancy_flag"] == true);
  double chosen = audit["calibration"]["lambda_chosen"].get<double>();
  double paper = audit["calibration"]["lambda_paper"].get<double>();
  CHECK(chosen > paper);
  CHECK(audit["checks"]["empirical_dp"]["passed"] == true);
  CHECK(audit["all_passed"] == true);
}

TEST_CASE("audit of an approx-DP config carries both sigma variants") {
  TempDir dir;
  json j = base_config(dir);
  j["T"] = 256;
  j["privacy"] = {{"mode", "approx"}, {"epsilon", 1.0}, {"delta", 1e-6}};
  auto cfg = write_config(dir, j);
  REQUIRE(run_cli("audit --config " + cfg.string()) == 0);
  json audit = json::parse(slurp(dir.path / "out" / "audit.json"));
  CHECK(audit["calibration"]["regime"] == "approx");
  CHECK(audit["calibration"].contains("y2_conservative"));
  CHECK(audit["calibration"].contains("y2_paper_variant"));
  double chosen = audit["calibration"]["sigma_chosen"].get<double>();
  CHECK(chosen >= audit["calibration"]["sigma_derived"].get<double>());
  CHECK(chosen >= audit["calibration"]["sigma_paper"].get<double>());
}
