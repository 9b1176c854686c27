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

#include "clockbid/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clockbid {

OracleResult oracle_bid(const Valuation& v, const Valuation& opp, const PriceGrid& grid,
                        const AuctionConfig& cfg) {
  cfg.validate();
  if (v.size() != cfg.player_capacity) {
    throw std::invalid_argument("valuation size does not match player capacity");
  }
  const int M = cfg.player_capacity;

  const PriceGrid opp_grid = PriceGrid::for_valuation(opp, grid.p_init, grid.delta_p);
  const int last = std::max(grid.r_bar, opp_grid.r_bar);

  OracleResult res;
  res.clearing_price.assign(static_cast<std::size_t>(M + 1), std::nullopt);
  std::vector<int> round_of(static_cast<std::size_t>(M + 1), -1);
  // Opponent demand is non-increasing, so one sweep fills every p_k.
  int filled = 0;
  for (int t = 0; t <= last && filled <= M; ++t) {
    const int room = cfg.supply - sb_demand(opp, grid.price(t));
    for (int k = 0; k <= std::min(room, M); ++k) {
      if (round_of[static_cast<std::size_t>(k)] < 0) {
        round_of[static_cast<std::size_t>(k)] = t;
        res.clearing_price[static_cast<std::size_t>(k)] = grid.price(t);
        ++filled;
      }
    }
  }

  // k = 0 always earns 0, even if the opponent never fits in the supply.
  res.k_star = 0;
  res.utility_u = 0.0;
  res.p_star = res.clearing_price[0].value_or(grid.price(last));
  res.tau = round_of[0] >= 0 ? round_of[0] : last;
  for (int k = 1; k <= M; ++k) {
    const auto& pk = res.clearing_price[static_cast<std::size_t>(k)];
    if (!pk) continue;
    const Money u = utility(v, k, *pk);
    if (u > res.utility_u) {
      res.k_star = k;
      res.utility_u = u;
      res.p_star = *pk;
      res.tau = round_of[static_cast<std::size_t>(k)];
    }
  }
  return res;
}

}  // namespace clockbid
