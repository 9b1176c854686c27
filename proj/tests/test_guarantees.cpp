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

#include <functional>

#include "clockbid/guarantees.hpp"
#include "clockbid/verification.hpp"
#include "support/generators.hpp"

namespace clockbid {
namespace {

using testing::for_all;
using testing::Gen;

struct Instance {
  Valuation v;
  PriceGrid grid;
  AuctionConfig cfg;
  TransitionKernel kernel;
  std::vector<double> init;
};

Instance random_instance(Gen& g, int m, int D, int r_bar) {
  std::vector<double> z(static_cast<std::size_t>(m));
  const double top = 70 + 3.0 * (r_bar - 1) + g.real(0.01, 3.0);
  z[0] = top;
  for (int j = 1; j < m; ++j) z[static_cast<std::size_t>(j)] = g.real(60, top);
  std::sort(z.begin(), z.end(), std::greater<>());
  Valuation v(z);
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  return {v, grid, AuctionConfig{g.integer(1, m), m, D}, g.kernel(std::max(r_bar, 1), D), g.simplex(D + 1)};
}

// Path enumeration through the engine.
double path_expectation(const Instance& in, const Strategy& s) {
  double total = 0.0;
  std::vector<int> path;
  std::function<void(double)> walk = [&](double prob) {
    const int t = static_cast<int>(path.size());
    if (t == in.grid.r_bar) {
      std::vector<int> trace = path;
      trace.resize(static_cast<std::size_t>(t + 1), 0);
      total += prob * run_auction(in.v, s, trace, in.cfg, in.grid).utility;
      return;
    }
    for (int d = 0; d <= in.cfg.opponent_capacity; ++d) {
      const double p = t == 0 ? in.init[static_cast<std::size_t>(d)] : in.kernel(t - 1, path.back(), d);
      if (p == 0.0) continue;
      path.push_back(d);
      walk(prob * p);
      path.pop_back();
    }
  };
  walk(1.0);
  return total;
}

MarkovStrategySpec random_spec(Gen& g, const Instance& in) {
  MarkovStrategySpec s(in.grid.r_bar, in.cfg.player_capacity, in.cfg.opponent_capacity);
  s.set_root_bid(g.integer(0, in.cfg.player_capacity));
  for (int t = 1; t < in.grid.r_bar; ++t)
    for (int k = 0; k <= in.cfg.player_capacity; ++k)
      for (int d = 0; d <= in.cfg.opponent_capacity; ++d) s.set_cell(t, k, d, g.integer(0, k));
  return s;
}

TEST(ExactGain, BellmanSpecEqualsRootValue) {
  for_all(301, 80, [](Gen& g) {
    const Instance in = random_instance(g, g.integer(1, 3), g.integer(1, 4), g.integer(1, 4));
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    const auto gain = exact_gain_vs_sb(spec_from_policy(sol.policy), in.v, in.kernel, in.init, in.grid, in.cfg);
    EXPECT_NEAR(gain.root, sol.values.root, 1e-12);
  });
}

TEST(ExactGain, MatchesPathEnumeration) {
  for_all(302, 80, [](Gen& g) {
    const Instance in = random_instance(g, g.integer(1, 3), g.integer(1, 3), g.integer(1, 4));
    const auto spec = random_spec(g, in);
    const auto gain = exact_gain_vs_sb(spec, in.v, in.kernel, in.init, in.grid, in.cfg);
    EXPECT_NEAR(gain.root, path_expectation(in, spec), 1e-10);
  });
}

TEST(ExactGain, ZeroAndStraightforwardBaselines) {
  for_all(303, 60, [](Gen& g) {
    const Instance in = random_instance(g, g.integer(1, 3), g.integer(1, 4), g.integer(1, 4));
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    const auto zero = zero_spec(in.grid.r_bar, in.cfg.player_capacity, in.cfg.opponent_capacity);
    EXPECT_EQ(exact_gain_vs_sb(zero, in.v, in.kernel, in.init, in.grid, in.cfg).root, 0.0);
    const auto sb = sb_spec(in.v, in.grid, in.cfg.opponent_capacity);
    const double sb_gain = exact_gain_vs_sb(sb, in.v, in.kernel, in.init, in.grid, in.cfg).root;
    EXPECT_LE(sb_gain, sol.values.root + 1e-12);
    EXPECT_NEAR(sb_gain, path_expectation(in, sb_strategy(in.v, in.grid)), 1e-10);
  });
}

TEST(StrategySpec, Validation) {
  MarkovStrategySpec s(3, 2, 2);
  EXPECT_THROW(s.set_cell(1, 1, 0, 2), std::invalid_argument);
  EXPECT_THROW(s.set_cell(3, 1, 0, 0), std::out_of_range);
  EXPECT_THROW(s.set_root_bid(3), std::invalid_argument);
  s.set_root_bid(1);
  EXPECT_EQ(s.bid({0, 2, Observation::kNoBid}), 1);
  EXPECT_EQ(s.bid({0, 0, Observation::kNoBid}), 0);
  EXPECT_EQ(s.bid({3, 2, 2}), 0);
  EXPECT_THROW(MarkovStrategySpec(1, -1, 0), std::invalid_argument);
}

double expected_count(int horizon, int m, int D, int supply) {
  double c = m + 1;
  for (int t = 1; t < horizon; ++t)
    for (int k = 1; k <= m; ++k)
      for (int d = 0; d <= D; ++d)
        if (k + d > supply) c *= k + 1;
  return c;
}

TEST(StrategyEnumerator, CountsAndVisitsEveryStrategy) {
  StrategyEnumerator single(2, 1, 1, 1);
  EXPECT_EQ(single.count(), 4.0);
  for (auto [h, m, D, s] : {std::tuple{2, 1, 1, 1}, {2, 2, 2, 2}, {3, 2, 1, 1}, {1, 3, 3, 2}}) {
    StrategyEnumerator en(h, m, D, s);
    EXPECT_EQ(en.count(), expected_count(h, m, D, s));
    MarkovStrategySpec spec;
    long seen = 0;
    while (en.next(spec)) {
      ++seen;
      EXPECT_LE(spec.root_bid(), m);
    }
    EXPECT_EQ(static_cast<double>(seen), en.count());
    EXPECT_FALSE(en.next(spec));
  }
}

TEST(StrategyEnumerator, SizeGuard) {
  EXPECT_THROW(StrategyEnumerator(6, 4, 6, 4), std::length_error);
}

TEST(StrategyEnumerator, ExhaustiveMaximumEqualsRootValue) {
  for_all(304, 20, [](Gen& g) {
    const Instance in = random_instance(g, 2, 2, 2);
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    StrategyEnumerator en(in.grid.r_bar, 2, 2, in.cfg.supply);
    MarkovStrategySpec spec;
    double best = -1e300;
    while (en.next(spec)) {
      best = std::max(best, exact_gain_vs_sb(spec, in.v, in.kernel, in.init, in.grid, in.cfg).root);
    }
    EXPECT_NEAR(best, sol.values.root, 1e-10);
  });
  const auto check = check_brute_force(10, 305);
  EXPECT_TRUE(check.passed) << check.detail;
}

TEST(ExactGainPair, PointMassEqualsSingleAuction) {
  for_all(306, 50, [](Gen& g) {
    const Valuation v = g.valuation(3, 60, 110);
    const Valuation nu = g.valuation(6, 40, 130);
    const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
    const std::vector<WeightedValuation> support{{nu, 1.0}};
    const auto player = sb_strategy(v, grid);
    std::vector<int> trace = sb_trace(nu, 70, 3);
    trace.resize(trace.size() + static_cast<std::size_t>(grid.r_bar) + 1, 0);
    const int supply = g.integer(1, 8);
    const double want = run_auction(v, player, trace, AuctionConfig{supply, 3, 6}, grid).utility;
    EXPECT_DOUBLE_EQ(exact_gain_pair(v, player, grid, sb_opponent(70, 3), support, supply), want);
  });
}

TEST(ExactGainPair, WeightsAreValidated) {
  const Valuation v({90});
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  const auto player = sb_strategy(v, grid);
  const std::vector<WeightedValuation> bad{{Valuation({80}), 0.5}, {Valuation({75}), 0.4}};
  EXPECT_THROW(exact_gain_pair(v, player, grid, sb_opponent(70, 3), bad, 1), std::invalid_argument);
  const std::vector<WeightedValuation> neg{{Valuation({80}), 1.5}, {Valuation({75}), -0.5}};
  EXPECT_THROW(exact_gain_pair(v, player, grid, sb_opponent(70, 3), neg, 1), std::invalid_argument);
  EXPECT_THROW(truncated_sb_opponent(70, 3, -1), std::invalid_argument);
}

TEST(ExactGainPair, ZeroShaveIsStraightforward) {
  for_all(307, 30, [](Gen& g) {
    const Valuation v = g.valuation(2, 60, 110);
    const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
    std::vector<WeightedValuation> support;
    for (int i = 0; i < 4; ++i) support.push_back({g.valuation(4, 40, 130), 0.25});
    const auto player = sb_strategy(v, grid);
    EXPECT_EQ(exact_gain_pair(v, player, grid, sb_opponent(70, 3), support, 2),
              exact_gain_pair(v, player, grid, truncated_sb_opponent(70, 3, 0), support, 2));
  });
}

TEST(Guarantees, TruncatedOpponentsNeverHurt) {
  GuaranteeOptions opt;
  opt.instances = 4;
  opt.opponents = 20;
  const auto r = check_truncated_opponents(opt, 308);
  EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Guarantees, MirroredOpponentReport) {
  GuaranteeOptions opt;
  opt.instances = 3;
  opt.draws = 100;
  const auto rep = mirrored_opponent_report(opt, 309);
  EXPECT_EQ(rep.instances, 3);
  EXPECT_GE(rep.se_diff, 0.0);
  EXPECT_NEAR(rep.mean_diff, rep.mean_vs_bellman - rep.mean_vs_sb, 1e-9);
}

}  // namespace
}  // namespace clockbid
