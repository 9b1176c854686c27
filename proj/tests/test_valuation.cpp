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

#include <gtest/gtest.h>

#include <limits>

#include "clockbid/valuation.hpp"
#include "support/generators.hpp"

namespace clockbid {
namespace {

using testing::for_all;
using testing::Gen;

// Upper concave majorant at k: best chord value over all pairs i <= k <= j,
// computed on the running maximum of the table.
std::vector<double> brute_hull(const RawValuation& raw) {
  std::vector<double> v = raw.values;
  for (std::size_t k = 1; k < v.size(); ++k) v[k] = std::max(v[k], v[k - 1]);
  std::vector<double> hull(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    double best = v[k];
    for (std::size_t i = 0; i <= k; ++i) {
      for (std::size_t j = k; j < v.size(); ++j) {
        if (i == j) continue;
        const double w = static_cast<double>(k - i) / static_cast<double>(j - i);
        best = std::max(best, (1 - w) * v[i] + w * v[j]);
      }
    }
    hull[k] = best;
  }
  return hull;
}

// Smallest k maximising values[k] - k p.
int brute_demand(const std::vector<double>& values, double p) {
  int best = 0;
  double best_u = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double u = values[k] - static_cast<double>(k) * p;
    if (u > best_u + 1e-9) {
      best = static_cast<int>(k);
      best_u = u;
    }
  }
  return best;
}

TEST(Valuation, RejectsUnsortedOrNegativeSlopes) {
  EXPECT_THROW(Valuation({1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(Valuation({1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(Valuation({std::numeric_limits<double>::infinity()}), std::invalid_argument);
}

TEST(Valuation, ValueIsPrefixSum) {
  const Valuation v({10, 5, 5});
  EXPECT_EQ(v.value(0), 0.0);
  EXPECT_EQ(v.value(2), 15.0);
  EXPECT_EQ(v.value(3), 20.0);
  EXPECT_THROW(v.value(4), std::out_of_range);
  EXPECT_THROW(v.value(-1), std::out_of_range);
}

TEST(ConcaveHull, LinearTableIsUnchanged) {
  EXPECT_EQ(concave_hull({{0, 5, 10, 15}}).slopes().size(), 3u);
  const Valuation h = concave_hull({{0, 5, 10, 15}});
  EXPECT_EQ(h, Valuation({5, 5, 5}));
}

TEST(ConcaveHull, LiftsDentedTable) {
  const Valuation h = concave_hull({{0, 10, 12, 20}});
  ASSERT_EQ(h.size(), 3);
  EXPECT_NEAR(h.slope(1), 10, 1e-12);
  EXPECT_NEAR(h.slope(2), 5, 1e-12);
  EXPECT_NEAR(h.slope(3), 5, 1e-12);
  EXPECT_NEAR(h.value(2), 15, 1e-12);
}

TEST(ConcaveHull, ZeroTable) { EXPECT_EQ(concave_hull({{0, 0, 0}}), Valuation({0, 0})); }

TEST(ConcaveHull, RejectsBadTables) {
  EXPECT_THROW(concave_hull({{1, 2}}), std::invalid_argument);
  EXPECT_THROW(concave_hull({{0, -1}}), std::invalid_argument);
  EXPECT_THROW(concave_hull({{}}), std::invalid_argument);
}

TEST(ConcaveHull, MatchesBruteForceMajorant) {
  for_all(11, 300, [](Gen& g) {
    const RawValuation raw = g.raw(g.integer(1, 7), 100.0);
    const Valuation h = concave_hull(raw);
    const auto want = brute_hull(raw);
    ASSERT_EQ(h.size() + 1, static_cast<int>(want.size()));
    for (int k = 0; k <= h.size(); ++k) EXPECT_NEAR(h.value(k), want[static_cast<std::size_t>(k)], 1e-9);
  });
}

TEST(ConcaveHull, DemandMatchesRawArgmax) {
  for_all(12, 300, [](Gen& g) {
    const RawValuation raw = g.raw(g.integer(1, 6), 60.0);
    const Valuation h = concave_hull(raw);
    for (int i = 0; i < 40; ++i) {
      // Prices strictly between hull slopes, where the argmax is unique up to
      // the downward tie rule.
      const double p = g.real(0.0, 70.0);
      bool near_slope = false;
      for (double z : h.slopes()) near_slope = near_slope || std::abs(z - p) < 1e-6;
      if (near_slope) continue;
      EXPECT_EQ(sb_demand(h, p), brute_demand(raw.values, p)) << "p=" << p;
    }
  });
}

TEST(SbDemand, CountsStrictlyGreaterSlopes) {
  const Valuation v({100, 80, 50});
  EXPECT_EQ(sb_demand(v, 70), 2);
  EXPECT_EQ(sb_demand(v, 80), 1);
  EXPECT_EQ(sb_demand(v, 100), 0);
  EXPECT_EQ(sb_demand(v, 1000), 0);
}

TEST(SbDemand, NonIncreasingInPriceAndEqualsMinArgmax) {
  for_all(13, 200, [](Gen& g) {
    const Valuation v = g.valuation(g.integer(1, 8), 0, 120);
    std::vector<double> values;
    for (int k = 0; k <= v.size(); ++k) values.push_back(v.value(k));
    int last = v.size();
    for (double p = 0; p < 130; p += 0.5) {
      const int d = sb_demand(v, p);
      EXPECT_LE(d, last);
      last = d;
      EXPECT_EQ(d, brute_demand(values, p));
    }
  });
}

TEST(Aggregate, MergesSlopes) {
  const std::vector<Valuation> one{Valuation({10, 5})};
  EXPECT_EQ(aggregate(one), Valuation({10, 5}));
  const std::vector<Valuation> two{Valuation({10, 4}), Valuation({8, 6})};
  EXPECT_EQ(aggregate(two), Valuation({10, 8, 6, 4}));
  EXPECT_EQ(aggregate(std::vector<Valuation>{}).size(), 0);
}

TEST(Aggregate, DemandIsSumOfDemands) {
  for_all(14, 200, [](Gen& g) {
    std::vector<Valuation> players;
    const int n = g.integer(1, 4);
    for (int i = 0; i < n; ++i) players.push_back(g.valuation(g.integer(0, 5), 0, 100));
    const Valuation agg = aggregate(players);
    for (int i = 0; i < 50; ++i) {
      const double p = g.coin(0.3) ? std::round(g.real(0, 100)) : g.real(0, 100);
      int sum = 0;
      for (const auto& v : players) sum += sb_demand(v, p);
      EXPECT_EQ(sb_demand(agg, p), sum);
    }
  });
}

TEST(Aggregate, ValueIsSupConvolution) {
  for_all(15, 100, [](Gen& g) {
    const std::vector<Valuation> players{g.valuation(g.integer(1, 4), 0, 50),
                                         g.valuation(g.integer(1, 4), 0, 50)};
    const Valuation agg = aggregate(players);
    for (int k = 0; k <= agg.size(); ++k) {
      double best = 0.0;
      for (int a = 0; a <= std::min(k, players[0].size()); ++a) {
        const int b = k - a;
        if (b > players[1].size()) continue;
        best = std::max(best, players[0].value(a) + players[1].value(b));
      }
      EXPECT_NEAR(agg.value(k), best, 1e-9);
    }
  });
}

TEST(Utility, DirectFormula) {
  const Valuation v({10, 5});
  EXPECT_EQ(utility(v, 2, 4), 7.0);
  EXPECT_EQ(utility(v, 0, 123), 0.0);
  EXPECT_EQ(utility(v, 1, 12), -2.0);
  EXPECT_THROW(utility(v, 3, 1), std::out_of_range);
}

TEST(Valuation, ValueConcaveAndNonDecreasing) {
  for_all(16, 200, [](Gen& g) {
    const Valuation v = concave_hull(g.raw(g.integer(1, 8), 100));
    for (int k = 1; k <= v.size(); ++k) {
      EXPECT_GE(v.value(k) - v.value(k - 1), -1e-12);
      if (k >= 2) EXPECT_LE(v.value(k) - v.value(k - 1), v.value(k - 1) - v.value(k - 2) + 1e-9);
    }
  });
}

}  // namespace
}  // namespace clockbid
