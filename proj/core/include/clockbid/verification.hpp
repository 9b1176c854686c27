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
#include <string>
#include <vector>

#include "clockbid/engine.hpp"
#include "clockbid/kernels.hpp"
#include "clockbid/valuation.hpp"

namespace clockbid {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  ///< summary on success, first witness on failure
  double seconds = 0.0;
  long flagged = 0;  ///< kernel check only: scored cells beyond z_limit normal SEs
};

/// Small random instance with an arbitrary upper-triangular stochastic
/// kernel. The player's top slope lies in (p(r_bar-1), p(r_bar)].
struct TinyInstance {
  Valuation v;
  PriceGrid grid;
  AuctionConfig cfg;
  TransitionKernel kernel;
  InitialDistribution init;
};

TinyInstance random_tiny_instance(std::uint64_t seed, int max_m = 2, int max_d = 3,
                                  int max_r = 3);

/// phi0 against the exhaustive maximum over all deterministic Markov
/// strategies, within 1e-10.
CheckResult check_brute_force(int instances, std::uint64_t seed);

/// Analytic kernels against sampled transition frequencies. First-order
/// cells compare P(d' | d); second-order cells also condition on the demand
/// two rounds back and probe the Markov property. A cell fails when its exact
/// binomial two-sided p-value is below both the tail mass beyond z_limit
/// normal SEs and alpha / (cells in its family). Cells beyond z_limit
/// normal SEs are counted in the report.
struct KernelCheckOptions {
  long samples = 100000;
  double z_limit = 4.0;
  double alpha = 0.01;
  double zmax = 110.0;
  double rate = 0.1;  ///< exponential rate per unit of money
  int capacity = 33;
  Money p_init = 70.0;
  Money delta_p = 3.0;
};
CheckResult check_kernel_frequencies(const KernelCheckOptions& opt, std::uint64_t seed);

/// Row sums, stochastic monotonicity, beta <= sigma, the cell-wise upper
/// bound, delta-monotonicity, solve/solve_reduced agreement and
/// exact_gain(Bellman) = phi0 over the standard parameter grids.
struct StructuralOptions {
  std::vector<double> zmax{110, 121, 132, 143, 154, 165};
  std::vector<double> rates{1.0 / 10, 1.0 / 11, 1.0 / 12, 1.0 / 13, 1.0 / 14, 1.0 / 15};
  int m = 11;
  int n = 4;
  Money p_init = 70.0;
  Money delta_p = 3.0;
  int valuations_per_model = 3;
};
CheckResult check_structural(const StructuralOptions& opt, std::uint64_t seed);

/// Pathwise check: for each sampled opponent valuation, a Bellman player
/// does at least as well against any opponent bidding below its
/// straightforward demand as against the straightforward opponent.
struct GuaranteeOptions {
  int instances = 20;
  int opponents = 100;
  int m = 4;
  int n = 4;  ///< D = (n-1) m
  double zmax = 110.0;
  Money p_init = 70.0;
  Money delta_p = 3.0;
  int draws = 200;  ///< opponent valuations for the mean comparison
};
CheckResult check_truncated_opponents(const GuaranteeOptions& opt, std::uint64_t seed);

/// Mean comparison over sampled opponent valuations: Bellman player facing a
/// mirrored Bellman opponent versus facing the straightforward opponent.
struct MirroredReport {
  int instances = 0;
  double mean_vs_bellman = 0.0;
  double mean_vs_sb = 0.0;
  double mean_diff = 0.0;
  double se_diff = 0.0;
  int failing_instances = 0;  ///< instances whose sample-mean gap is negative
  double worst_diff = 0.0;
  double worst_se = 0.0;
};
MirroredReport mirrored_opponent_report(const GuaranteeOptions& opt, std::uint64_t seed);
CheckResult check_mirrored_opponents(const GuaranteeOptions& opt, std::uint64_t seed);

/// Every check with default sizes.
std::vector<CheckResult> run_verification(std::uint64_t seed, bool quick = false);

}  // namespace clockbid
