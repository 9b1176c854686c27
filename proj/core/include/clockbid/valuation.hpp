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

namespace clockbid {

/// Amounts of money. Prices live on a coarse additive grid, so a double is
/// exact enough; every demand decision uses the strict comparison `z > p`.
using Money = double;

/// Raw valuation table: `values[k]` is the most the bidder would pay for k
/// items. Must satisfy values[0] == 0 and values[k] >= 0.
struct RawValuation {
  std::vector<Money> values;
};

/// Concave, non-decreasing valuation stored as its Newton-polygon slopes
/// z_1 >= z_2 >= ... >= z_m >= 0, so that value(k) = z_1 + ... + z_k.
///
/// Immutable once built. The slope vector doubles as the indifference prices:
/// a straightforward bidder facing price p asks for #{j : z_j > p} items.
class Valuation {
 public:
  Valuation() = default;

  /// Throws std::invalid_argument unless the slopes are finite, non-negative
  /// and sorted non-increasing.
  explicit Valuation(std::vector<Money> slopes);

  static Valuation zero(int items);

  int size() const { return static_cast<int>(slopes_.size()); }
  std::span<const Money> slopes() const { return slopes_; }

  /// z_j for j in 1..size().
  Money slope(int j) const { return slopes_.at(static_cast<std::size_t>(j - 1)); }

  /// v(k) for k in 0..size(); throws std::out_of_range otherwise.
  Money value(int k) const;

  /// v(1), or 0 for an empty valuation.
  Money top_slope() const { return slopes_.empty() ? 0.0 : slopes_.front(); }

  friend bool operator==(const Valuation&, const Valuation&) = default;

 private:
  std::vector<Money> slopes_;
  std::vector<Money> prefix_{0.0};
};

/// Slopes of the smallest non-decreasing concave majorant of `raw`.
/// Straightforward demand of the hull equals that of the raw table at every
/// price (smallest maximiser of v(k) - k p).
Valuation concave_hull(const RawValuation& raw);

/// Straightforward-bidding demand: #{j : z_j > p}. Ties go to the smaller
/// quantity.
int sb_demand(const Valuation& v, Money p);

/// Super-player valuation: the sorted union of every player's slopes. Its
/// demand is the sum of individual demands and its value function is the
/// sup-convolution of the inputs.
Valuation aggregate(std::span<const Valuation> players);

/// u(k, p) = v(k) - k p.
Money utility(const Valuation& v, int k, Money p);

}  // namespace clockbid
