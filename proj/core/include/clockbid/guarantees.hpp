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
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "clockbid/engine.hpp"
#include "clockbid/kernels.hpp"
#include "clockbid/solver.hpp"
#include "clockbid/valuation.hpp"

namespace clockbid {

/// Deterministic Markov strategy given as a lookup table: a root bid for
/// round 0 and one bid per (t, own_last, other_last) for t in 1..horizon-1.
/// The bidder is held at 0 from round `horizon` on.
class MarkovStrategySpec final : public Strategy {
 public:
  MarkovStrategySpec() = default;
  MarkovStrategySpec(int horizon, int own_capacity, int other_capacity);

  int horizon() const { return horizon_; }
  int own_capacity() const { return own_; }
  int other_capacity() const { return other_; }

  int root_bid() const { return root_; }
  void set_root_bid(int b);

  int cell(int t, int k, int d) const { return cells_(t, k, d); }
  /// Throws std::invalid_argument unless 0 <= b <= k.
  void set_cell(int t, int k, int d, int b);

  int bid(const Observation& obs) const override;

 private:
  int horizon_ = 0;
  int own_ = 0;
  int other_ = 0;
  int root_ = 0;
  StateTable<int> cells_;  // r_bar = horizon - 1
};

/// Spec that replays a solved Bellman policy. Cleared cells hold the
/// standing bid (never consulted).
MarkovStrategySpec spec_from_policy(const Policy& policy);

/// Straightforward bidding as a table: min(sigma(t), k).
MarkovStrategySpec sb_spec(const Valuation& v, const PriceGrid& grid, int other_capacity);

/// Bids 0 everywhere.
MarkovStrategySpec zero_spec(int horizon, int own_capacity, int other_capacity);

/// G(t, k, d) for the player's spec against an opponent whose demand follows
/// the kernel, over t in 1..r_bar, plus the root expectation.
struct GainTable {
  StateTable<double> g;
  double root = 0.0;
};

/// Expected utility recursion: the payoff v(k) - k p(t-1) on cleared
/// states, 0 on uncleared states of round r_bar, and otherwise the kernel
/// expectation of the next state reached by the spec's bid.
GainTable exact_gain_vs_sb(const MarkovStrategySpec& player, const Valuation& v,
                           const TransitionKernel& kernel, std::span<const double> init,
                           const PriceGrid& grid, const AuctionConfig& cfg);

struct WeightedValuation {
  Valuation valuation;
  double weight = 0.0;
};

/// Builds the opponent's strategy for one realised valuation, together with
/// its price grid (which carries the opponent's horizon).
struct OpponentPlay {
  std::unique_ptr<Strategy> strategy;
  PriceGrid grid;
};
using OpponentFactory = std::function<OpponentPlay(const Valuation&)>;

/// Exact expectation over a finite-support opponent valuation law: every
/// support point is played out deterministically with run_auction2 and the
/// player's utilities are averaged with the given weights (which must sum to
/// 1 within 1e-9).
double exact_gain_pair(const Valuation& v, const Strategy& player, const PriceGrid& grid,
                       const OpponentFactory& opponent,
                       std::span<const WeightedValuation> support, int supply);

/// Straightforward opponent of a given valuation on the shared ladder.
OpponentFactory sb_opponent(Money p_init, Money delta_p);

/// Straightforward opponent that sheds `shave` units: max(sigma(t) - shave, 0).
OpponentFactory truncated_sb_opponent(Money p_init, Money delta_p, int shave);

/// Odometer over every deterministic Markov strategy of a small instance:
/// root bid in 0..own_capacity and, for each uncleared (t, k, d) with t in
/// 1..horizon-1, a bid in 0..k. Cleared cells are fixed to k.
class StrategyEnumerator {
 public:
  static constexpr double kMaxStrategies = 1e7;

  /// Throws std::length_error if the strategy count exceeds kMaxStrategies.
  StrategyEnumerator(int horizon, int own_capacity, int other_capacity, int supply);

  double count() const { return count_; }

  /// Writes the next strategy into `out`; false once exhausted.
  bool next(MarkovStrategySpec& out);

 private:
  struct Slot {
    int t, k, d;
  };
  int horizon_, own_, other_, supply_;
  std::vector<Slot> slots_;
  std::vector<int> digits_;  // digits_[0] is the root
  double count_ = 1.0;
  bool started_ = false;
  bool done_ = false;
};

}  // namespace clockbid
