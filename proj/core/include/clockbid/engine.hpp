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
#include <stdexcept>
#include <vector>

#include "clockbid/valuation.hpp"

namespace clockbid {

/// Ascending price ladder p(t) = p_init + t * delta_p.
///
/// `r_bar` is the bidder's relevance horizon: from round r_bar on no positive
/// bid can earn a positive utility, so the bidder's demand is 0 there.
struct PriceGrid {
  Money p_init = 0.0;
  Money delta_p = 1.0;
  int r_bar = 0;

  PriceGrid() = default;
  PriceGrid(Money p_init, Money delta_p, int r_bar);

  /// Horizon derived from the bidder's top slope: the smallest r with
  /// p(r) >= v(1). Zero when v(1) <= p_init.
  static PriceGrid for_valuation(const Valuation& v, Money p_init, Money delta_p);

  Money price(int t) const { return p_init + t * delta_p; }
};

/// Supply and bidding capacities. In the standard setting the player can ask
/// for up to m items and the aggregated opponents for up to (n-1)m.
struct AuctionConfig {
  int supply = 1;
  int player_capacity = 1;
  int opponent_capacity = 1;

  static AuctionConfig for_players(int m, int n);

  /// Same auction seen from the opponent's side.
  AuctionConfig mirrored() const { return {supply, opponent_capacity, player_capacity}; }

  void validate() const;
};

/// What a bidder knows when it bids at round `round`: its own standing bid and
/// the other side's demand at the previous round. At round 0 `other_last` is
/// kNoBid and `own_last` is the bidder's capacity.
struct Observation {
  static constexpr int kNoBid = -1;

  int round = 0;
  int own_last = 0;
  int other_last = kNoBid;
};

/// Bidding rule. Implementations must respect eligibility (never exceed
/// `own_last`); the engine rejects violations.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual int bid(const Observation& obs) const = 0;
};

class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Straightforward bidding: ask for sb_demand(v, p(t)), clamped to the
/// standing bid.
class SbStrategy final : public Strategy {
 public:
  SbStrategy(Valuation v, PriceGrid grid) : v_(std::move(v)), grid_(grid) {}
  int bid(const Observation& obs) const override;

 private:
  Valuation v_;
  PriceGrid grid_;
};

SbStrategy sb_strategy(const Valuation& v, const PriceGrid& grid);

struct RoundRecord {
  int round = 0;
  int player_bid = 0;
  int opponent_demand = 0;
};

struct AuctionOutcome {
  int tau = 0;               ///< round whose demands cleared
  int final_bid = 0;         ///< player's allocation
  int final_opponent = 0;    ///< opponent's allocation
  Money final_price = 0.0;   ///< p(tau)
  Money utility = 0.0;       ///< player's utility, v(final_bid) - final_bid * p(tau)
  Money opponent_utility = 0.0;  ///< only filled by run_auction2
  std::vector<RoundRecord> history;
};

/// Runs the clock against an opponent whose demand per round is given by
/// `opponent_trace`. The player bids through `player` on rounds
/// 0..grid.r_bar-1 and is held at 0 afterwards; the loop stops at the first
/// round where both demands fit in the supply and the player pays that
/// round's price.
///
/// Throws std::invalid_argument if the trace increases, exceeds the
/// opponent capacity, or runs out before the auction clears, and
/// ProtocolViolation if the strategy breaks eligibility.
AuctionOutcome run_auction(const Valuation& v, const Strategy& player,
                           std::span<const int> opponent_trace,
                           const AuctionConfig& cfg, const PriceGrid& grid);

/// One side of a two-strategy auction. Each side is held at 0 from its own
/// horizon `grid.r_bar` on; both sides must share p_init and delta_p.
struct Participant {
  const Valuation& valuation;
  const Strategy& strategy;
  PriceGrid grid;
};

/// Symmetric variant of run_auction where the opponent also bids through a
/// strategy. Capacities are the valuation sizes.
AuctionOutcome run_auction2(const Participant& player, const Participant& opponent,
                            int supply);

/// Straightforward demand of `v` at p(0), p(1), ... up to and including the
/// first round where it reaches 0.
std::vector<int> sb_trace(const Valuation& v, Money p_init, Money delta_p);

}  // namespace clockbid
