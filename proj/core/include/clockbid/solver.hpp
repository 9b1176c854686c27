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

#include <span>
#include <vector>

#include "clockbid/engine.hpp"
#include "clockbid/kernels.hpp"
#include "clockbid/valuation.hpp"

namespace clockbid {

/// Absolute tolerance used to detect ties between Q-values.
inline constexpr double kTieTolerance = 1e-12;

/// Dense (t, k, d) table over t in 1..r_bar, k in 0..own_capacity,
/// d in 0..other_capacity.
template <typename T>
class StateTable {
 public:
  StateTable() = default;
  StateTable(int r_bar, int own_capacity, int other_capacity, T fill = T{})
      : r_bar_(r_bar), own_(own_capacity), other_(other_capacity),
        data_(static_cast<std::size_t>(r_bar) * static_cast<std::size_t>(own_capacity + 1) *
                  static_cast<std::size_t>(other_capacity + 1),
              fill) {}

  int r_bar() const { return r_bar_; }
  int own_capacity() const { return own_; }
  int other_capacity() const { return other_; }

  bool contains(int t, int k, int d) const {
    return t >= 1 && t <= r_bar_ && k >= 0 && k <= own_ && d >= 0 && d <= other_;
  }

  const T& operator()(int t, int k, int d) const { return data_[index(t, k, d)]; }
  T& at(int t, int k, int d) { return data_[index(t, k, d)]; }

 private:
  std::size_t index(int t, int k, int d) const {
    return (static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(own_ + 1) +
            static_cast<std::size_t>(k)) *
               static_cast<std::size_t>(other_ + 1) +
           static_cast<std::size_t>(d);
  }

  int r_bar_ = 0;
  int own_ = 0;
  int other_ = 0;
  std::vector<T> data_;
};

/// phi(t, k, d): optimal expected utility when entering round t holding a
/// standing bid k while the opponent's demand at round t-1 was d.
/// `root` is the value before round 0.
struct ValueTable {
  StateTable<double> phi;
  double root = 0.0;
};

/// Bellman policy. beta(t, k, d) is the bid placed at round t, the smallest
/// maximiser of q(t, d, .) over 0..k; it is -1 on cleared states (k + d <=
/// supply) and 0 on uncleared states of round r_bar.
struct Policy {
  int supply = 0;
  int k0 = 0;        ///< straightforward demand at p(0), the root action bound
  int root_bid = 0;  ///< bid placed at round 0
  std::vector<double> root_q;
  StateTable<int> beta;
  /// q(t, d, u) for t in 1..r_bar-1, stored as a StateTable indexed (t, u, d).
  StateTable<double> q;

  double q_value(int t, int d, int u) const { return q(t, u, d); }
};

struct Solution {
  ValueTable values;
  Policy policy;
};

/// Backward induction on the sufficient statistic (round, standing bid,
/// last opponent demand). Round t uses kernel step t-1 (p(t-1) -> p(t)).
/// Throws std::invalid_argument on dimension mismatches.
Solution solve(const Valuation& v, const TransitionKernel& kernel,
               std::span<const double> init, const PriceGrid& grid, const AuctionConfig& cfg);

/// Same recursion with actions restricted to u <= min(k, sigma(t)), where
/// sigma(t) is the straightforward demand of v at p(t). The root value equals
/// solve()'s; on states with k <= sigma(t-1) the tables coincide.
ValueTable solve_reduced(const Valuation& v, const TransitionKernel& kernel,
                         std::span<const double> init, const PriceGrid& grid,
                         const AuctionConfig& cfg);

/// Plays a solved policy. Querying a state where the auction has already
/// cleared is a contract violation (std::logic_error).
class BellmanStrategy final : public Strategy {
 public:
  explicit BellmanStrategy(Policy policy) : policy_(std::move(policy)) {}
  int bid(const Observation& obs) const override;
  const Policy& policy() const { return policy_; }

 private:
  Policy policy_;
};

BellmanStrategy bellman_strategy(const Policy& policy);

}  // namespace clockbid
