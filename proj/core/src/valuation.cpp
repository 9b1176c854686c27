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

#include "clockbid/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>

namespace clockbid {

Valuation::Valuation(std::vector<Money> slopes) : slopes_(std::move(slopes)) {
  prefix_.reserve(slopes_.size() + 1);
  for (std::size_t j = 0; j < slopes_.size(); ++j) {
    const Money z = slopes_[j];
    if (!std::isfinite(z) || z < 0.0) {
      throw std::invalid_argument("valuation slope " + std::to_string(j + 1) +
                                  " is negative or not finite");
    }
    if (j > 0 && z > slopes_[j - 1]) {
      throw std::invalid_argument("valuation slopes must be non-increasing");
    }
    prefix_.push_back(prefix_.back() + z);
  }
}

Valuation Valuation::zero(int items) {
  if (items < 0) throw std::invalid_argument("negative item count");
  return Valuation(std::vector<Money>(static_cast<std::size_t>(items), 0.0));
}

Money Valuation::value(int k) const {
  if (k < 0 || k > size()) {
    throw std::out_of_range("item count " + std::to_string(k) + " outside 0.." +
                            std::to_string(size()));
  }
  return prefix_[static_cast<std::size_t>(k)];
}

Valuation concave_hull(const RawValuation& raw) {
  const auto& v = raw.values;
  if (v.empty()) throw std::invalid_argument("raw valuation needs v(0)");
  if (v.front() != 0.0) throw std::invalid_argument("raw valuation must have v(0) = 0");
  for (Money x : v) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("raw valuation values must be finite and >= 0");
    }
  }

  // Running maximum forces monotonicity; the upper hull of a non-decreasing
  // point set is itself non-decreasing.
  std::vector<Money> w(v.size());
  std::partial_sum(v.begin(), v.end(), w.begin(),
                   [](Money a, Money b) { return std::max(a, b); });

  // Monotone chain over (k, w[k]); pop vertices on or below the new chord.
  std::vector<int> hull;
  for (int k = 0; k < static_cast<int>(w.size()); ++k) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2];
      const int b = hull.back();
      const double cross = (w[b] - w[a]) * (k - a) - (w[k] - w[a]) * (b - a);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(k);
  }

  std::vector<Money> slopes;
  slopes.reserve(w.size() - 1);
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const int a = hull[i - 1];
    const int b = hull[i];
    const Money s = (w[b] - w[a]) / (b - a);
    for (int j = a; j < b; ++j) slopes.push_back(s);
  }
  // Division rounding can flip two nearly collinear segments.
  for (std::size_t j = 1; j < slopes.size(); ++j) {
    slopes[j] = std::min(slopes[j], slopes[j - 1]);
  }
  for (Money& s : slopes) s = std::max(s, 0.0);
  return Valuation(std::move(slopes));
}

int sb_demand(const Valuation& v, Money p) {
  const auto z = v.slopes();
  const auto it = std::partition_point(z.begin(), z.end(), [p](Money s) { return s > p; });
  return static_cast<int>(it - z.begin());
}

Valuation aggregate(std::span<const Valuation> players) {
  std::vector<Money> all;
  for (const auto& v : players) all.insert(all.end(), v.slopes().begin(), v.slopes().end());
  std::sort(all.begin(), all.end(), std::greater<>());
  return Valuation(std::move(all));
}

Money utility(const Valuation& v, int k, Money p) { return v.value(k) - k * p; }

}  // namespace clockbid
