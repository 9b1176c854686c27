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

#include "clockbid/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clockbid {

PriceGrid::PriceGrid(Money p_init_, Money delta_p_, int r_bar_)
    : p_init(p_init_), delta_p(delta_p_), r_bar(r_bar_) {
  if (!(p_init >= 0.0) || !std::isfinite(p_init)) throw std::invalid_argument("p_init must be >= 0");
  if (!(delta_p > 0.0) || !std::isfinite(delta_p)) throw std::invalid_argument("delta_p must be > 0");
  if (r_bar < 0) throw std::invalid_argument("r_bar must be >= 0");
}

PriceGrid PriceGrid::for_valuation(const Valuation& v, Money p_init, Money delta_p) {
  PriceGrid grid(p_init, delta_p, 0);
  const Money top = v.top_slope();
  if (top <= p_init) return grid;
  int r = static_cast<int>(std::ceil((top - p_init) / delta_p));
  r = std::max(r, 0);
  // Guard against the quotient rounding just below an integer.
  while (grid.price(r) < top) ++r;
  while (r > 0 && grid.price(r - 1) >= top) --r;
  grid.r_bar = r;
  return grid;
}

AuctionConfig AuctionConfig::for_players(int m, int n) {
  if (m < 1) throw std::invalid_argument("need at least one item");
  if (n < 2) throw std::invalid_argument("need at least two players");
  AuctionConfig cfg{m, m, (n - 1) * m};
  return cfg;
}

void AuctionConfig::validate() const {
  if (supply < 1) throw std::invalid_argument("supply must be >= 1");
  if (player_capacity < 0 || opponent_capacity < 0) {
    throw std::invalid_argument("capacities must be >= 0");
  }
}

int SbStrategy::bid(const Observation& obs) const {
  return std::min(sb_demand(v_, grid_.price(obs.round)), obs.own_last);
}

SbStrategy sb_strategy(const Valuation& v, const PriceGrid& grid) { return SbStrategy(v, grid); }

namespace {

int checked_bid(const Strategy& s, const Observation& obs) {
  const int b = s.bid(obs);
  if (b < 0 || b > obs.own_last) {
    throw ProtocolViolation("round " + std::to_string(obs.round) + ": bid " + std::to_string(b) +
                            " violates eligibility (standing bid " +
                            std::to_string(obs.own_last) + ")");
  }
  return b;
}

}  // namespace

AuctionOutcome run_auction(const Valuation& v, const Strategy& player,
                           std::span<const int> opponent_trace, const AuctionConfig& cfg,
                           const PriceGrid& grid) {
  cfg.validate();
  if (v.size() != cfg.player_capacity) {
    throw std::invalid_argument("valuation size does not match player capacity");
  }
  for (std::size_t t = 0; t < opponent_trace.size(); ++t) {
    const int d = opponent_trace[t];
    if (d < 0 || d > cfg.opponent_capacity) {
      throw std::invalid_argument("opponent demand outside 0..capacity at round " +
                                  std::to_string(t));
    }
    if (t > 0 && d > opponent_trace[t - 1]) {
      throw std::invalid_argument("opponent trace must be non-increasing");
    }
  }

  AuctionOutcome out;
  int own_last = cfg.player_capacity;
  int other_last = Observation::kNoBid;
  for (int t = 0;; ++t) {
    if (static_cast<std::size_t>(t) >= opponent_trace.size()) {
      throw std::invalid_argument("opponent trace ends before the auction clears");
    }
    const int b = t < grid.r_bar ? checked_bid(player, {t, own_last, other_last}) : 0;
    const int d = opponent_trace[static_cast<std::size_t>(t)];
    out.history.push_back({t, b, d});
    if (b + d <= cfg.supply) {
      out.tau = t;
      out.final_bid = b;
      out.final_opponent = d;
      out.final_price = grid.price(t);
      out.utility = utility(v, b, out.final_price);
      return out;
    }
    own_last = b;
    other_last = d;
  }
}

AuctionOutcome run_auction2(const Participant& player, const Participant& opponent,
                            int supply) {
  if (supply < 1) throw std::invalid_argument("supply must be >= 1");
  if (player.grid.p_init != opponent.grid.p_init ||
      player.grid.delta_p != opponent.grid.delta_p) {
    throw std::invalid_argument("participants must share the price ladder");
  }
  const PriceGrid& prices = player.grid;

  AuctionOutcome out;
  int mine = player.valuation.size();
  int theirs = opponent.valuation.size();
  int mine_seen = Observation::kNoBid;
  int theirs_seen = Observation::kNoBid;
  for (int t = 0;; ++t) {
    const int b = t < player.grid.r_bar ? checked_bid(player.strategy, {t, mine, mine_seen}) : 0;
    const int d =
        t < opponent.grid.r_bar ? checked_bid(opponent.strategy, {t, theirs, theirs_seen}) : 0;
    out.history.push_back({t, b, d});
    if (b + d <= supply) {
      out.tau = t;
      out.final_bid = b;
      out.final_opponent = d;
      out.final_price = prices.price(t);
      out.utility = utility(player.valuation, b, out.final_price);
      out.opponent_utility = utility(opponent.valuation, d, out.final_price);
      return out;
    }
    mine = b;
    theirs = d;
    mine_seen = d;
    theirs_seen = b;
  }
}

std::vector<int> sb_trace(const Valuation& v, Money p_init, Money delta_p) {
  const PriceGrid grid(p_init, delta_p, 0);
  std::vector<int> trace;
  for (int t = 0;; ++t) {
    trace.push_back(sb_demand(v, grid.price(t)));
    if (trace.back() == 0) return trace;
  }
}

}  // namespace clockbid
