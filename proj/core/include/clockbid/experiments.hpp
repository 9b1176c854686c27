// Copyright 2026 The Clockbid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "clockbid/engine.hpp"
#include "clockbid/kernels.hpp"

namespace clockbid {

/// How an exponential parameter is read. kScale: lambda is the mean gap
/// between consecutive slopes (rate = 1 / lambda). kRate: lambda is the rate.
enum class LambdaMode { kScale, kRate };

std::string to_string(LambdaMode mode);
LambdaMode parse_lambda_mode(const std::string& name);

struct ExperimentConfig {
  ModelKind model = ModelKind::kUniform;
  std::vector<double> zmax{110.0};   ///< uniform parameter grid
  std::vector<double> lambda{10.0};  ///< exponential parameter grid
  LambdaMode lambda_mode = LambdaMode::kScale;
  int m = 11;
  int n = 4;
  Money p_init = 70.0;
  Money delta_p = 3.0;
  long runs = 10000;
  std::uint64_t seed = 1;
  std::string out;  ///< output directory; empty means no files
  int threads = 1;

  /// Throws std::invalid_argument on a bad config.
  void validate() const;

  const std::vector<double>& params() const {
    return model == ModelKind::kUniform ? zmax : lambda;
  }
  /// Model with the given grid parameter and number of slopes.
  OpponentModel model_for(double param, int capacity) const;
};

/// Applies one `key = value` setting. Keys: model, zmax, lambda,
/// lambda_mode, m, n, pinit, dp, runs, seed, out, threads. List values are
/// comma separated. Throws std::invalid_argument on unknown keys or bad
/// values.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Reads a flat key=value file; blank lines and lines starting with '#' are
/// skipped.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

struct RunRecord {
  double param = 0.0;
  long run = 0;
  std::uint64_t seed = 0;
  double u = 0.0;      ///< oracle utility
  double u_hat = 0.0;  ///< Bellman utility
  double u_sb = 0.0;   ///< straightforward utility
  int tau_oracle = 0;
  int tau_bellman = 0;
  int tau_sb = 0;
};

struct ParamSummary {
  double param = 0.0;
  long runs = 0;
  double mean_u = 0.0;
  double mean_u_hat = 0.0;
  double mean_u_sb = 0.0;
  double se_u = 0.0;
  double se_u_hat = 0.0;
  double se_u_sb = 0.0;
  double ratio = 0.0;     ///< mean_u_hat / mean_u
  double sb_ratio = 0.0;  ///< mean_u_sb / mean_u
  double p_equal = 0.0;   ///< share of runs with u_hat == u
  double p_80 = 0.0;      ///< share of runs with u_hat >= 0.8 u
  double se_p_equal = 0.0;
  double se_p_80 = 0.0;
  long dominance_violations = 0;  ///< runs with u_hat > u, u_sb > u or u_hat < 0
};

struct ExperimentResult {
  std::vector<ParamSummary> summaries;
  std::vector<RunRecord> runs;  ///< grouped by parameter, then run index
  long violations() const;
};

/// Plays every run once per grid parameter: samples the player (m slopes)
/// and the opponent ((n-1) m slopes), computes the oracle utility, then plays
/// the Bellman and the straightforward player against the opponent's
/// straightforward trace. Run i uses seed + i; results do not depend on the
/// thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Same protocol with only the straightforward player; u_hat holds the
/// straightforward utility.
ExperimentResult sb_baseline(const ExperimentConfig& cfg);

ParamSummary summarize(double param, const std::vector<RunRecord>& runs);

/// CSV writers. Per-run columns: param, run, seed, U, U_hat, tau_oracle,
/// tau_bellman, U_sb, tau_sb.
void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs);
void write_summary_csv(std::ostream& os, const std::vector<ParamSummary>& summaries);

/// Writes runs.csv and summary.csv into cfg.out (created if missing).
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace clockbid
