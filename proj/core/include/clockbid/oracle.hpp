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

#include <optional>
#include <vector>

#include "clockbid/engine.hpp"
#include "clockbid/valuation.hpp"

namespace clockbid {

struct OracleResult {
  int k_star = 0;
  Money p_star = 0.0;
  Money utility_u = 0.0;
  int tau = 0;  ///< round index of p_star
  /// Clearing price p_k for each quantity k; nullopt when the opponent never
  /// leaves room for k items on the searched ladder.
  std::vector<std::optional<Money>> clearing_price;
};

/// Best fixed bid for a bidder who knows the opponent's valuation. For each k,
/// p_k is the first ladder price at which the opponent's straightforward
/// demand leaves k items; the oracle bids the smallest maximiser of
/// v(k) - k p_k. The ladder is searched up to the later of the bidder's
/// horizon and the opponent's top slope.
OracleResult oracle_bid(const Valuation& v, const Valuation& opp, const PriceGrid& grid,
                        const AuctionConfig& cfg);

}  // namespace clockbid
