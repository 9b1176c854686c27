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

#include <cmath>
#include <functional>

#include "clockbid/solver.hpp"
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

Instance random_instance(Gen& g, int max_m = 3, int max_d = 4, int max_r = 4) {
  const int m = g.integer(1, max_m);
  const int d = g.integer(1, max_d);
  const int supply = g.integer(1, m + d - 1 > 0 ? m + d - 1 : 1);
  Valuation v = g.valuation(m, 60.0, 70.0 + 3.0 * max_r);
  const PriceGrid grid = PriceGrid::for_valuation(v, 70.0, 3.0);
  return {v, grid, AuctionConfig{supply, m, d}, g.kernel(std::max(grid.r_bar, 1), d),
          g.simplex(d + 1)};
}

// Forward expectimax over the bid at every round, written directly from the
// clock rules: bid, observe the opponent's demand, stop at the first round
// whose demands fit in the supply.
double optimum(const Instance& in) {
  std::function<double(int, int, int)> value = [&](int t, int own, int prev) -> double {
    if (t >= in.grid.r_bar) return 0.0;
    double best = -1e300;
    for (int b = 0; b <= own; ++b) {
      double e = 0.0;
      for (int d = 0; d <= in.cfg.opponent_capacity; ++d) {
        const double p = t == 0 ? in.init[static_cast<std::size_t>(d)] : in.kernel(t - 1, prev, d);
        if (p == 0.0) continue;
        e += p * (b + d <= in.cfg.supply ? in.v.value(b) - b * in.grid.price(t) : value(t + 1, b, d));
      }
      best = std::max(best, e);
    }
    return best;
  };
  return value(0, in.cfg.player_capacity, -1);
}

// Expected utility of a strategy by enumerating every opponent demand path
// and replaying it through the engine.
double path_expectation(const Instance& in, const Strategy& s) {
  const int r = in.grid.r_bar;
  double total = 0.0;
  std::vector<int> path;
  std::function<void(double)> walk = [&](double prob) {
    const int t = static_cast<int>(path.size());
    if (t == r) {
      std::vector<int> trace = path;
      trace.resize(static_cast<std::size_t>(r + 1), 0);
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

TEST(Solve, ZeroValuation) {
  const Valuation v = Valuation::zero(3);
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  EXPECT_EQ(grid.r_bar, 0);
  const auto model = OpponentModel::uniform(110, 9);
  const auto sol = solve(v, build_kernel(model, grid), marginal(model, 70), grid,
                         AuctionConfig::for_players(3, 4));
  EXPECT_EQ(sol.values.root, 0.0);
  EXPECT_EQ(sol.policy.root_bid, 0);
}

// One unit, one opposing slope: the bidder holds 1 until the opponent leaves
// or the price reaches its value.
TEST(Solve, SingleUnitClosedForm) {
  const Valuation v({95.5});
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  ASSERT_EQ(grid.r_bar, 9);
  const AuctionConfig cfg{1, 1, 1};

  for (double rate : {0.1, 1.0 / 15, 0.02}) {
    const auto model = OpponentModel::exponential(rate, 1);
    const double mu = rate * 3;
    double want = (1 - std::exp(-rate * 70)) * (95.5 - 70);
    for (int t = 1; t < 9; ++t) {
      want += std::exp(-rate * 70) * std::exp(-mu * (t - 1)) * (1 - std::exp(-mu)) * (95.5 - grid.price(t));
    }
    const auto sol = solve(v, build_kernel(model, grid), marginal(model, 70), grid, cfg);
    EXPECT_NEAR(sol.values.root, want, 1e-12);
    EXPECT_EQ(sol.policy.root_bid, 1);
    for (int t = 1; t < 9; ++t) EXPECT_EQ(sol.policy.beta(t, 1, 1), 1) << t;
  }

  const auto model = OpponentModel::uniform(110, 1);
  double want = 70.0 / 110 * 25.5;
  for (int t = 1; t < 9; ++t) want += 3.0 / 110 * (95.5 - grid.price(t));
  const auto sol = solve(v, build_kernel(model, grid), marginal(model, 70), grid, cfg);
  EXPECT_NEAR(sol.values.root, want, 1e-12);
}

TEST(Solve, MatchesExpectimax) {
  for_all(101, 150, [](Gen& g) {
    const Instance in = random_instance(g);
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    EXPECT_NEAR(sol.values.root, optimum(in), 1e-10);
  });
}

TEST(Solve, PolicyRealisesItsValue) {
  for_all(102, 100, [](Gen& g) {
    const Instance in = random_instance(g);
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    const BellmanStrategy s(sol.policy);
    EXPECT_NEAR(path_expectation(in, s), sol.values.root, 1e-10);
  });
}

TEST(Solve, ReducedAgrees) {
  for_all(103, 100, [](Gen& g) {
    const Instance in = random_instance(g);
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    const auto red = solve_reduced(in.v, in.kernel, in.init, in.grid, in.cfg);
    EXPECT_EQ(red.root, sol.values.root);
    for (int t = 1; t <= in.grid.r_bar; ++t) {
      const int sigma = sb_demand(in.v, in.grid.price(t - 1));
      for (int k = 0; k <= std::min(sigma, in.cfg.player_capacity); ++k) {
        for (int d = 0; d <= in.cfg.opponent_capacity; ++d) {
          EXPECT_NEAR(red.phi(t, k, d), sol.values.phi(t, k, d), 1e-12);
        }
      }
    }
  });
}

TEST(Solve, TableInvariants) {
  for_all(104, 60, [](Gen& g) {
    const Instance in = random_instance(g);
    const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
    const auto& pol = sol.policy;
    EXPECT_EQ(pol.k0, sb_demand(in.v, 70));
    EXPECT_LE(pol.root_bid, pol.k0);
    EXPECT_GE(sol.values.root, 0.0);
    for (int t = 1; t <= in.grid.r_bar; ++t) {
      for (int k = 0; k <= in.cfg.player_capacity; ++k) {
        for (int d = 0; d <= in.cfg.opponent_capacity; ++d) {
          const int b = pol.beta(t, k, d);
          const double phi = sol.values.phi(t, k, d);
          if (k + d <= in.cfg.supply) {
            EXPECT_EQ(b, -1);
            EXPECT_DOUBLE_EQ(phi, utility(in.v, k, in.grid.price(t - 1)));
          } else if (t == in.grid.r_bar) {
            EXPECT_EQ(b, 0);
            EXPECT_EQ(phi, 0.0);
          } else {
            EXPECT_GE(b, 0);
            EXPECT_LE(b, k);
            EXPECT_LE(b, sb_demand(in.v, in.grid.price(t)));
            EXPECT_GE(phi, -1e-12);
            EXPECT_NEAR(phi, pol.q_value(t, d, b), 1e-15);
            for (int u = 0; u < b; ++u) EXPECT_LT(pol.q_value(t, d, u), phi);
          }
        }
      }
    }
  });
}

TEST(Solve, MonotoneInOpponentDemandOnStandardKernels) {
  const auto model = OpponentModel::uniform(121, 33);
  Gen g(105);
  for (int i = 0; i < 5; ++i) {
    const Valuation v = sample_valuation(OpponentModel::uniform(121, 1), g.engine()(), 1, 11);
    const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
    const auto sol = solve(v, build_kernel(model, grid), marginal(model, 70), grid,
                           AuctionConfig::for_players(11, 4));
    for (int t = 1; t <= grid.r_bar; ++t) {
      const int sigma = sb_demand(v, grid.price(t - 1));
      for (int k = 0; k <= sigma; ++k) {
        for (int d = 0; d < 33; ++d) {
          EXPECT_GE(sol.values.phi(t, k, d) + 1e-12, sol.values.phi(t, k, d + 1));
        }
      }
    }
  }
}

TEST(BellmanStrategy, Contract) {
  Gen g(106);
  Instance in = random_instance(g, 2, 2, 3);
  while (in.grid.r_bar < 2) in = random_instance(g, 2, 2, 3);
  const auto sol = solve(in.v, in.kernel, in.init, in.grid, in.cfg);
  const BellmanStrategy s(sol.policy);
  EXPECT_EQ(s.bid({0, in.cfg.player_capacity, Observation::kNoBid}), sol.policy.root_bid);
  EXPECT_EQ(s.bid({in.grid.r_bar, in.cfg.player_capacity, in.cfg.opponent_capacity}), 0);
  EXPECT_THROW(s.bid({1, 0, 0}), std::logic_error);
}

TEST(Solve, DimensionErrors) {
  const Valuation v({90, 80});
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  const auto model = OpponentModel::uniform(110, 2);
  const auto k = build_kernel(model, grid);
  const auto init = marginal(model, 70);
  EXPECT_THROW(solve(v, k, init, grid, AuctionConfig{2, 3, 2}), std::invalid_argument);
  EXPECT_THROW(solve(v, k, init, grid, AuctionConfig{2, 2, 3}), std::invalid_argument);
  EXPECT_THROW(solve(v, k, std::vector<double>{1.0}, grid, AuctionConfig{2, 2, 2}), std::invalid_argument);
  EXPECT_THROW(solve(v, build_kernel(model, PriceGrid(70, 3, 2)), init, grid, AuctionConfig{2, 2, 2}),
               std::invalid_argument);
  EXPECT_NO_THROW(solve(v, k, init, grid, AuctionConfig{2, 2, 2}));
}

}  // namespace
}  // namespace clockbid
