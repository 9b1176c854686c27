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

#include "clockbid/guarantees.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace clockbid {

MarkovStrategySpec::MarkovStrategySpec(int horizon, int own_capacity, int other_capacity)
    : horizon_(horizon), own_(own_capacity), other_(other_capacity),
      cells_(std::max(horizon - 1, 0), own_capacity, other_capacity, 0) {
  if (horizon < 0 || own_capacity < 0 || other_capacity < 0) {
    throw std::invalid_argument("strategy table dimensions must be >= 0");
  }
}

void MarkovStrategySpec::set_root_bid(int b) {
  if (b < 0 || b > own_) throw std::invalid_argument("root bid outside 0..capacity");
  root_ = b;
}

void MarkovStrategySpec::set_cell(int t, int k, int d, int b) {
  if (!cells_.contains(t, k, d)) throw std::out_of_range("strategy cell out of range");
  if (b < 0 || b > k) {
    throw std::invalid_argument("bid " + std::to_string(b) + " breaks eligibility at k=" +
                                std::to_string(k));
  }
  cells_.at(t, k, d) = b;
}

int MarkovStrategySpec::bid(const Observation& obs) const {
  if (obs.round >= horizon_) return 0;
  if (obs.round == 0) return std::min(root_, obs.own_last);
  return cells_(obs.round, obs.own_last, obs.other_last);
}

MarkovStrategySpec spec_from_policy(const Policy& policy) {
  const auto& beta = policy.beta;
  MarkovStrategySpec spec(beta.r_bar(), beta.own_capacity(), beta.other_capacity());
  spec.set_root_bid(policy.root_bid);
  for (int t = 1; t < beta.r_bar(); ++t) {
    for (int k = 0; k <= beta.own_capacity(); ++k) {
      for (int d = 0; d <= beta.other_capacity(); ++d) {
        const int b = beta(t, k, d);
        spec.set_cell(t, k, d, b >= 0 ? b : k);
      }
    }
  }
  return spec;
}

MarkovStrategySpec sb_spec(const Valuation& v, const PriceGrid& grid, int other_capacity) {
  MarkovStrategySpec spec(grid.r_bar, v.size(), other_capacity);
  spec.set_root_bid(std::min(sb_demand(v, grid.price(0)), v.size()));
  for (int t = 1; t < grid.r_bar; ++t) {
    const int sigma = sb_demand(v, grid.price(t));
    for (int k = 0; k <= v.size(); ++k) {
      for (int d = 0; d <= other_capacity; ++d) spec.set_cell(t, k, d, std::min(sigma, k));
    }
  }
  return spec;
}

MarkovStrategySpec zero_spec(int horizon, int own_capacity, int other_capacity) {
  MarkovStrategySpec spec(horizon, own_capacity, other_capacity);
  spec.set_root_bid(0);
  return spec;  // cells default to 0
}

GainTable exact_gain_vs_sb(const MarkovStrategySpec& player, const Valuation& v,
                           const TransitionKernel& kernel, std::span<const double> init,
                           const PriceGrid& grid, const AuctionConfig& cfg) {
  cfg.validate();
  const int R = grid.r_bar;
  const int M = cfg.player_capacity;
  const int D = cfg.opponent_capacity;
  if (v.size() != M || player.own_capacity() != M || player.other_capacity() != D ||
      player.horizon() != R || kernel.capacity() != D ||
      init.size() != static_cast<std::size_t>(D + 1) || (R >= 2 && kernel.steps() < R - 1)) {
    throw std::invalid_argument("exact_gain_vs_sb: dimension mismatch");
  }

  GainTable out;
  out.g = StateTable<double>(R, M, D, 0.0);
  auto& g = out.g;
  for (int t = R; t >= 1; --t) {
    for (int k = 0; k <= M; ++k) {
      for (int d = 0; d <= D; ++d) {
        if (k + d <= cfg.supply) {
          g.at(t, k, d) = utility(v, k, grid.price(t - 1));
        } else if (t < R) {
          const int u = player.cell(t, k, d);
          const auto row = kernel.row(t - 1, d);
          double acc = 0.0;
          for (int to = 0; to <= d; ++to) acc += row[static_cast<std::size_t>(to)] * g(t + 1, u, to);
          g.at(t, k, d) = acc;
        }
      }
    }
  }
  if (R >= 1) {
    const int u0 = player.root_bid();
    double acc = 0.0;
    for (int d = 0; d <= D; ++d) acc += init[static_cast<std::size_t>(d)] * g(1, u0, d);
    out.root = acc;
  }
  return out;
}

double exact_gain_pair(const Valuation& v, const Strategy& player, const PriceGrid& grid,
                       const OpponentFactory& opponent,
                       std::span<const WeightedValuation> support, int supply) {
  double total = 0.0;
  for (const auto& s : support) {
    if (!(s.weight >= 0.0)) throw std::invalid_argument("negative support weight");
    total += s.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("support weights must sum to 1");

  double gain = 0.0;
  for (const auto& s : support) {
    const OpponentPlay play = opponent(s.valuation);
    const auto out = run_auction2({v, player, grid}, {s.valuation, *play.strategy, play.grid}, supply);
    gain += s.weight * out.utility;
  }
  return gain;
}

namespace {

class TruncatedSb final : public Strategy {
 public:
  TruncatedSb(Valuation v, PriceGrid grid, int shave)
      : v_(std::move(v)), grid_(grid), shave_(shave) {}
  int bid(const Observation& obs) const override {
    const int want = std::max(sb_demand(v_, grid_.price(obs.round)) - shave_, 0);
    return std::min(want, obs.own_last);
  }

 private:
  Valuation v_;
  PriceGrid grid_;
  int shave_;
};

}  // namespace

OpponentFactory sb_opponent(Money p_init, Money delta_p) {
  return [=](const Valuation& nu) {
    const PriceGrid g = PriceGrid::for_valuation(nu, p_init, delta_p);
    return OpponentPlay{std::make_unique<SbStrategy>(nu, g), g};
  };
}

OpponentFactory truncated_sb_opponent(Money p_init, Money delta_p, int shave) {
  if (shave < 0) throw std::invalid_argument("shave must be >= 0");
  return [=](const Valuation& nu) {
    const PriceGrid g = PriceGrid::for_valuation(nu, p_init, delta_p);
    return OpponentPlay{std::make_unique<TruncatedSb>(nu, g, shave), g};
  };
}

StrategyEnumerator::StrategyEnumerator(int horizon, int own_capacity, int other_capacity,
                                       int supply)
    : horizon_(horizon), own_(own_capacity), other_(other_capacity), supply_(supply) {
  count_ = own_ + 1.0;
  for (int t = 1; t < horizon_; ++t) {
    for (int k = 1; k <= own_; ++k) {
      for (int d = 0; d <= other_; ++d) {
        if (k + d > supply_) {
          slots_.push_back({t, k, d});
          count_ *= k + 1.0;
        }
      }
    }
  }
  if (count_ > kMaxStrategies) {
    throw std::length_error("strategy space too large to enumerate (" +
                            std::to_string(count_) + " strategies)");
  }
  digits_.assign(slots_.size() + 1, 0);
}

bool StrategyEnumerator::next(MarkovStrategySpec& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else {
    std::size_t i = 0;
    for (; i < digits_.size(); ++i) {
      const int base = i == 0 ? own_ + 1 : slots_[i - 1].k + 1;
      if (++digits_[i] < base) break;
      digits_[i] = 0;
    }
    if (i == digits_.size()) {
      done_ = true;
      return false;
    }
  }

  if (out.horizon() != horizon_ || out.own_capacity() != own_ || out.other_capacity() != other_) {
    out = MarkovStrategySpec(horizon_, own_, other_);
    for (int t = 1; t < horizon_; ++t) {
      for (int k = 0; k <= own_; ++k) {
        for (int d = 0; d <= other_; ++d) {
          out.set_cell(t, k, d, k + d <= supply_ ? k : 0);
        }
      }
    }
  }
  out.set_root_bid(digits_[0]);
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    out.set_cell(slots_[i].t, slots_[i].k, slots_[i].d, digits_[i + 1]);
  }
  return true;
}

}  // namespace clockbid
