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
#include <span>
#include <string>
#include <vector>

#include "clockbid/engine.hpp"
#include "clockbid/valuation.hpp"

namespace clockbid {

enum class ModelKind { kUniform, kExponential };

/// Distribution of the aggregated opponent's slopes.
///
/// Uniform: every slope is an independent U[0, z_max] draw, then sorted.
/// Exponential: the gaps z_j - z_{j+1} (with z_{D+1} = 0) are iid
/// exponential with `rate` per unit of money, so the number of slopes below a
/// price p behaves like a Poisson count of mean rate * p.
struct OpponentModel {
  ModelKind kind = ModelKind::kUniform;
  double z_max = 0.0;
  double rate = 0.0;
  int capacity = 0;  ///< D, the number of opponent slopes

  static OpponentModel uniform(double z_max, int capacity);
  static OpponentModel exponential(double rate, int capacity);

  /// Same family and parameters, different number of slopes.
  OpponentModel with_capacity(int capacity) const;

  void validate() const;
};

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

/// Dense per-round transition matrices over opponent demand levels 0..D.
/// Step t maps the demand at p(t) to the demand at p(t+1). Rows are
/// stochastic and upper-triangular in the sense P[t][d][d'] = 0 for d' > d.
class TransitionKernel {
 public:
  TransitionKernel() = default;
  TransitionKernel(int steps, int capacity);

  int steps() const { return steps_; }
  int capacity() const { return capacity_; }

  double operator()(int t, int from, int to) const { return data_[index(t, from, to)]; }
  double& at(int t, int from, int to) { return data_[index(t, from, to)]; }

  std::span<const double> row(int t, int from) const {
    return {data_.data() + index(t, from, 0), static_cast<std::size_t>(capacity_ + 1)};
  }
  std::span<double> row(int t, int from) {
    return {data_.data() + index(t, from, 0), static_cast<std::size_t>(capacity_ + 1)};
  }

 private:
  std::size_t index(int t, int from, int to) const {
    const auto w = static_cast<std::size_t>(capacity_ + 1);
    return (static_cast<std::size_t>(t) * w + static_cast<std::size_t>(from)) * w +
           static_cast<std::size_t>(to);
  }

  int steps_ = 0;
  int capacity_ = 0;
  std::vector<double> data_;
};

/// Law of the opponent demand at a single price, over 0..D.
using InitialDistribution = std::vector<double>;

/// Binomial thinning kernel: with u = (z_max - p(t+1)) / (z_max - p(t)),
/// P[t][d][d'] = C(d, d') u^d' (1-u)^(d-d'); all mass on 0 once
/// z_max <= p(t+1). Builds grid.r_bar steps.
TransitionKernel uniform_kernel(const OpponentModel& model, const PriceGrid& grid);

/// Binomial(D, max(0, 1 - p / z_max)).
InitialDistribution uniform_marginal(const OpponentModel& model, Money p);

/// Poisson shift kernel with mean mu = rate * delta_p per step:
/// P[d][d'] = e^-mu mu^(d-d') / (d-d')! for d' >= 1, the tail
/// P(Poisson(mu) >= d) on d' = 0, and demand 0 is absorbing.
/// Time-homogeneous; builds grid.r_bar identical steps.
TransitionKernel exponential_kernel(const OpponentModel& model, const PriceGrid& grid);

/// pi[d] = Poisson(rate p){D - d} for d >= 1, pi[0] = P(Poisson(rate p) >= D).
InitialDistribution exponential_marginal(const OpponentModel& model, Money p);

/// Dispatch on model.kind.
TransitionKernel build_kernel(const OpponentModel& model, const PriceGrid& grid);
InitialDistribution marginal(const OpponentModel& model, Money p);

/// players * m slopes drawn from `model` (its capacity is ignored), sorted
/// non-increasing. Deterministic in `seed`.
Valuation sample_valuation(const OpponentModel& model, std::uint64_t seed, int players, int m);

/// Counter-based seed derivation (splitmix64 of base and stream).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct SmCheck {
  bool ok = true;
  int t = -1;
  int s = -1;
  int delta = -1;
};

/// Stochastic monotonicity: for every step t, threshold s and d < D, the tail
/// mass at or above s of row d+1 dominates that of row d (tolerance 1e-12).
/// Reports the first violating (t, s, d).
SmCheck check_sm(const TransitionKernel& kernel);

struct MpCell {
  int t = -1;
  int prev = -1;  ///< demand at p(t-1); -1 for first-order cells
  int from = -1;
  int to = -1;
  long count = 0;
  long conditioning = 0;
  double expected = 0.0;
  double z = 0.0;
  double p_value = 1.0;  ///< exact two-sided binomial tail
};

/// Empirical evidence that the opponent demand is a Markov chain with the
/// analytic kernel. First-order cells compare P(d_{t+1} | d_t) with the
/// kernel; second-order cells additionally condition on d_{t-1}. A cell is
/// scored when the normal approximation is sound (at least 5 expected
/// successes and failures); transitions the kernel forbids but the samples
/// show are counted separately.
struct MpReport {
  long samples = 0;
  int first_order_cells = 0;
  int second_order_cells = 0;
  double max_abs_deviation = 0.0;
  MpCell worst_first_order;
  MpCell worst_second_order;
  long impossible_transitions = 0;
  std::vector<double> first_order_z;  ///< every scored cell
  std::vector<double> second_order_z;
  std::vector<double> first_order_p;
  std::vector<double> second_order_p;

  double max_first_order_z() const { return worst_first_order.z; }
  double max_second_order_z() const { return worst_second_order.z; }
  static int count_above(const std::vector<double>& z, double limit);
  static double min_of(const std::vector<double>& p);
};

/// Exact two-sided binomial p-value: twice the smaller tail at `k`, capped at 1.
double binomial_two_sided_p(long n, long k, double p);

/// Samples `samples` opponent valuations with model.capacity slopes, records
/// their straightforward demand at p(0..grid.r_bar) and scores the kernel
/// built from the same grid.
MpReport check_mp_empirical(const OpponentModel& model, const PriceGrid& grid, long samples,
                            std::uint64_t seed);

/// Same, scoring a caller-supplied kernel (at least grid.r_bar steps)
/// against samples drawn from `model`.
MpReport check_mp_empirical(const OpponentModel& model, const PriceGrid& grid,
                            const TransitionKernel& kernel, long samples, std::uint64_t seed);

}  // namespace clockbid
