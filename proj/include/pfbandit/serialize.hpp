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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pfbandit/bench.hpp"
#include "pfbandit/private_bandit.hpp"
#include "pfbandit/privacy_audit.hpp"

namespace pfb::io {

// 17 significant digits: enough for exact double round trips in CSV.
inline std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Atomic file write: temp file in the target directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline const char* privacy_mode_name(bandit::PrivacyMode mode) {
  switch (mode) {
    case bandit::PrivacyMode::kNone: return "none";
    case bandit::PrivacyMode::kPure: return "pure";
    case bandit::PrivacyMode::kApprox: return "approx";
  }
  return "none";
}

inline const char* noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kZero: return "zero";
    case NoiseKind::kLaplace: return "laplace";
    case NoiseKind::kGaussian: return "gaussian";
  }
  return "zero";
}

inline nlohmann::json params_to_json(const bandit::BanditParams& p) {
  nlohmann::json j;
  j["T"] = p.horizon;
  j["rounds"] = p.rounds;
  j["batch"] = p.batch;
  j["eta"] = p.eta;
  j["delta_smooth"] = p.delta_smooth;
  j["dimension"] = p.dim;
  j["lipschitz"] = p.lipschitz;
  j["diameter"] = p.diameter;
  j["privacy"] = {{"mode", privacy_mode_name(p.privacy.mode)},
                  {"epsilon", p.privacy.epsilon},
                  {"delta", p.privacy.delta}};
  j["noise"] = {{"kind", noise_kind_name(p.noise.kind)}, {"scale", p.noise.scale}};
  j["feasibility_mode"] = p.feasibility == bandit::FeasibilityMode::kShrinkWrap
                              ? "shrink_wrap"
                              : "enlarged_domain";
  return j;
}

inline nlohmann::json calibration_to_json(const audit::CalibrationReport& rep) {
  nlohmann::json j;
  j["regime"] = privacy_mode_name(rep.regime);
  j["log_convention"] = rep.log_convention;
  if (rep.regime == bandit::PrivacyMode::kNone) return j;
  j["epsilon"] = rep.epsilon;
  j["discrepancy_flag"] = rep.discrepancy_flag;
  if (rep.regime == bandit::PrivacyMode::kPure) {
    j["y1_first_principles"] = rep.y1_first_principles;
    j["y1_paper_displayed"] = rep.y1_paper_displayed;
    j["lambda_chosen"] = rep.lambda_chosen;
    j["lambda_paper"] = rep.lambda_paper;
  } else {
    j["delta"] = rep.delta;
    j["delta0"] = rep.delta0;
    j["y2_conservative"] = rep.y2_conservative;
    j["y2_paper_variant"] = rep.y2_paper_variant;
    j["sigma_chosen"] = rep.sigma_chosen;
    j["sigma_derived"] = rep.sigma_derived;
    j["sigma_paper"] = rep.sigma_paper;
  }
  return j;
}

inline nlohmann::json fit_to_json(const bench::ExponentFit& fit) {
  nlohmann::json j;
  j["grid"] = fit.grid;
  j["mean_regrets"] = fit.mean_regrets;
  j["std_errors"] = fit.std_errors;
  j["slope"] = fit.slope;
  j["half_width"] = fit.half_width;
  j["excluded_points"] = fit.excluded_points;
  return j;
}

// trace.csv rows: t, round, instantaneous loss, cumulative loss, cumulative
// regret (vs the full-horizon comparator point).
inline std::string trace_to_csv(const bandit::RegretTrace& trace) {
  std::string out = "t,round,loss,cumulative_loss,cumulative_regret\n";
  for (std::size_t i = 0; i < trace.losses.size(); ++i) {
    int round = static_cast<int>(i) / trace.params.batch + 1;
    out += std::to_string(i + 1) + "," + std::to_string(round) + "," +
           fmt17(trace.losses[i]) + "," + fmt17(trace.cumulative[i]) + ",";
    out += trace.regret_curve.empty() ? std::string("nan") : fmt17(trace.regret_curve[i]);
    out += "\n";
  }
  return out;
}

}  // namespace pfb::io
