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

#include "clockbid/solver.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace clockbid {

namespace {

void check_dimensions(const Valuation& v, const TransitionKernel& kernel,
                      std::span<const double> init, const PriceGrid& grid,
                      const AuctionConfig& cfg) {
  cfg.validate();
  if (v.size() != cfg.player_capacity) {
    throw std::invalid_argument("valuation has " + std::to_string(v.size()) +
                                " slopes but player capacity is " +
                                std::to_string(cfg.player_capacity));
  }
  if (kernel.capacity() != cfg.opponent_capacity) {
    throw std::invalid_argument("kernel capacity does not match opponent capacity");
  }
  if (init.size() != static_cast<std::size_t>(cfg.opponent_capacity + 1)) {
    throw std::invalid_argument("initial distribution must cover 0..opponent capacity");
  }
  if (grid.r_bar >= 2 && kernel.steps() < grid.r_bar - 1) {
    throw std::invalid_argument("kernel covers " + std::to_string(kernel.steps()) +
                                " steps, solver needs " + std::to_string(grid.r_bar - 1));
  }
}

// Expected continuation sum_{d' <= d} P[step][d][d'] * table(t, u, d').
double continuation(const TransitionKernel& kernel, int step, int d,
                    const StateTable<double>& table, int t, int u) {
  const auto row = kernel.row(step, d);
  double acc = 0.0;
  for (int to = 0; to <= d; ++to) acc += row[static_cast<std::size_t>(to)] * table(t, u, to);
  return acc;
}

// Smallest u in [0, limit] whose value is within kTieTolerance of the best.
int tie_broken_argmax(std::span<const double> values, int limit) {
  double best = -std::numeric_limits<double>::infinity();
  for (int u = 0; u <= limit; ++u) best = std::max(best, values[static_cast<std::size_t>(u)]);
  for (int u = 0; u <= limit; ++u) {
    if (values[static_cast<std::size_t>(u)] >= best - kTieTolerance) return u;
  }
  return limit;
}

}  // namespace

Solution solve(const Valuation& v, const TransitionKernel& kernel, std::span<const double> init,
               const PriceGrid& grid, const AuctionConfig& cfg) {
  check_dimensions(v, kernel, init, grid, cfg);
  const int R = grid.r_bar;
  const int M = cfg.player_capacity;
  const int D = cfg.opponent_capacity;
  const int supply = cfg.supply;

  Solution sol;
  auto& phi = sol.values.phi;
  auto& pol = sol.policy;
  phi = StateTable<double>(R, M, D, 0.0);
  pol.supply = supply;
  pol.beta = StateTable<int>(R, M, D, -1);
  pol.q = StateTable<double>(std::max(R - 1, 0), M, D, 0.0);
  pol.k0 = std::min(sb_demand(v, grid.price(0)), M);

  std::vector<double> qrow(static_cast<std::size_t>(M + 1));
  for (int t = R; t >= 1; --t) {
    const Money paid = grid.price(t - 1);
    for (int d = 0; d <= D; ++d) {
      const bool any_open = M + d > supply;
      if (t < R && any_open) {
        for (int u = 0; u <= M; ++u) {
          qrow[static_cast<std::size_t>(u)] = continuation(kernel, t - 1, d, phi, t + 1, u);
          pol.q.at(t, u, d) = qrow[static_cast<std::size_t>(u)];
        }
      }
      for (int k = 0; k <= M; ++k) {
        if (k + d <= supply) {
          phi.at(t, k, d) = utility(v, k, paid);
        } else if (t == R) {
          phi.at(t, k, d) = 0.0;
          pol.beta.at(t, k, d) = 0;
        } else {
          const int u = tie_broken_argmax(qrow, k);
          pol.beta.at(t, k, d) = u;
          phi.at(t, k, d) = qrow[static_cast<std::size_t>(u)];
        }
      }
    }
  }

  pol.root_q.assign(static_cast<std::size_t>(pol.k0 + 1), 0.0);
  if (R >= 1) {
    for (int u = 0; u <= pol.k0; ++u) {
      double acc = 0.0;
      for (int d = 0; d <= D; ++d) acc += init[static_cast<std::size_t>(d)] * phi(1, u, d);
      pol.root_q[static_cast<std::size_t>(u)] = acc;
    }
    pol.root_bid = tie_broken_argmax(pol.root_q, pol.k0);
    sol.values.root = pol.root_q[static_cast<std::size_t>(pol.root_bid)];
  } else {
    pol.root_bid = 0;
    sol.values.root = 0.0;
  }
  return sol;
}

ValueTable solve_reduced(const Valuation& v, const TransitionKernel& kernel,
                         std::span<const double> init, const PriceGrid& grid,
                         const AuctionConfig& cfg) {
  check_dimensions(v, kernel, init, grid, cfg);
  const int R = grid.r_bar;
  const int M = cfg.player_capacity;
  const int D = cfg.opponent_capacity;

  ValueTable out;
  auto& g = out.phi;
  g = StateTable<double>(R, M, D, 0.0);
  // Same tie rule as solve, so both recursions pick identical actions.
  std::vector<double> qrow(static_cast<std::size_t>(M + 1));
  for (int t = R; t >= 1; --t) {
    const int cap = std::min(sb_demand(v, grid.price(t)), M);
    for (int k = 0; k <= M; ++k) {
      for (int d = 0; d <= D; ++d) {
        if (k + d <= cfg.supply) {
          g.at(t, k, d) = utility(v, k, grid.price(t - 1));
        } else if (t < R) {
          const int limit = std::min(k, cap);
          for (int u = 0; u <= limit; ++u) {
            qrow[static_cast<std::size_t>(u)] = continuation(kernel, t - 1, d, g, t + 1, u);
          }
          g.at(t, k, d) = qrow[static_cast<std::size_t>(tie_broken_argmax(qrow, limit))];
        }
      }
    }
  }
  if (R >= 1) {
    const int k0 = std::min(sb_demand(v, grid.price(0)), M);
    for (int u = 0; u <= k0; ++u) {
      double acc = 0.0;
      for (int d = 0; d <= D; ++d) acc += init[static_cast<std::size_t>(d)] * g(1, u, d);
      qrow[static_cast<std::size_t>(u)] = acc;
    }
    out.root = qrow[static_cast<std::size_t>(tie_broken_argmax(qrow, k0))];
  }
  return out;
}

int BellmanStrategy::bid(const Observation& obs) const {
  const auto& beta = policy_.beta;
  if (obs.round >= beta.r_bar()) return 0;
  if (obs.round == 0) return std::min(policy_.root_bid, obs.own_last);
  if (obs.own_last + obs.other_last <= policy_.supply) {
    throw std::logic_error("Bellman policy queried on a cleared state");
  }
  if (!beta.contains(obs.round, obs.own_last, obs.other_last)) {
    throw std::out_of_range("observation outside the solved state space");
  }
  return beta(obs.round, obs.own_last, obs.other_last);
}

BellmanStrategy bellman_strategy(const Policy& policy) { return BellmanStrategy(policy); }

}  // namespace clockbid
