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

#include "clockbid/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "clockbid/guarantees.hpp"
#include "clockbid/solver.hpp"

namespace clockbid {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> random_simplex(std::mt19937_64& rng, int size) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(static_cast<std::size_t>(size));
  double total = 0.0;
  for (auto& x : w) total += (x = e(rng));
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

TinyInstance random_tiny_instance(std::uint64_t seed, int max_m, int max_d, int max_r) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int m = pick(1, max_m);
  const int D = pick(1, max_d);
  const int R = pick(1, max_r);
  const Money p_init = 70.0;
  const Money dp = 3.0;
  const PriceGrid grid(p_init, dp, R);

  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Money> slopes(static_cast<std::size_t>(m));
  slopes[0] = grid.price(R - 1) + dp * (1.0 - u01(rng));  // in (p(R-1), p(R)]
  for (int j = 1; j < m; ++j) slopes[static_cast<std::size_t>(j)] = (p_init - 6.0) + (slopes[0] - p_init + 6.0) * u01(rng);
  std::sort(slopes.begin(), slopes.end(), std::greater<>());

  TransitionKernel kernel(std::max(R - 1, 1), D);
  for (int t = 0; t < kernel.steps(); ++t) {
    for (int d = 0; d <= D; ++d) {
      const auto w = random_simplex(rng, d + 1);
      for (int to = 0; to <= d; ++to) kernel.at(t, d, to) = w[static_cast<std::size_t>(to)];
    }
  }
  return {Valuation(std::move(slopes)), grid, AuctionConfig{m, m, D}, std::move(kernel),
          random_simplex(rng, D + 1)};
}

CheckResult check_brute_force(int instances, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"brute-force optimality", true, {}, 0.0};
  double worst = 0.0;
  double strategies = 0.0;
  for (int i = 0; i < instances; ++i) {
    const TinyInstance inst = random_tiny_instance(derive_seed(seed, static_cast<std::uint64_t>(i)));
    const Solution sol = solve(inst.v, inst.kernel, inst.init, inst.grid, inst.cfg);
    StrategyEnumerator en(inst.grid.r_bar, inst.cfg.player_capacity, inst.cfg.opponent_capacity,
                          inst.cfg.supply);
    strategies += en.count();
    MarkovStrategySpec spec;
    double best = -1e300;
    while (en.next(spec)) {
      best = std::max(best, exact_gain_vs_sb(spec, inst.v, inst.kernel, inst.init, inst.grid,
                                             inst.cfg).root);
    }
    const double gap = std::abs(best - sol.values.root);
    worst = std::max(worst, gap);
    if (gap > 1e-10 && res.passed) {
      res.passed = false;
      std::ostringstream os;
      os << "instance " << i << " (m=" << inst.cfg.player_capacity
         << ", D=" << inst.cfg.opponent_capacity << ", r_bar=" << inst.grid.r_bar
         << "): phi0=" << sol.values.root << " exhaustive max=" << best;
      res.detail = os.str();
    }
  }
  if (res.passed) {
    std::ostringstream os;
    os << instances << " instances, " << strategies << " strategies, max |gap| " << worst;
    res.detail = os.str();
  }
  res.seconds = since(t0);
  return res;
}

CheckResult check_kernel_frequencies(const KernelCheckOptions& opt, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"kernel frequencies", true, {}, 0.0};
  std::ostringstream os;
  const struct {
    OpponentModel model;
    Money top;
  } cases[] = {
      {OpponentModel::uniform(opt.zmax, opt.capacity), opt.zmax},
      // The player's horizon for this model rarely exceeds twice the mean top slope.
      {OpponentModel::exponential(opt.rate, opt.capacity), opt.p_init + 2.0 * 11.0 / opt.rate},
  };
  for (const auto& c : cases) {
    const int R = static_cast<int>(std::ceil((c.top - opt.p_init) / opt.delta_p));
    const PriceGrid grid(opt.p_init, opt.delta_p, std::max(R, 2));
    const MpReport rep = check_mp_empirical(c.model, grid, opt.samples, derive_seed(seed, 1 + static_cast<int>(c.model.kind)));
    // Per-cell level: the two-sided tail of z_limit, tightened to the
    // Bonferroni level when the family is large.
    const double per_cell = std::erfc(opt.z_limit / std::sqrt(2.0));
    const double first_level = std::min(per_cell, opt.alpha / std::max(rep.first_order_cells, 1));
    const double second_level = std::min(per_cell, opt.alpha / std::max(rep.second_order_cells, 1));
    const double min_p1 = MpReport::min_of(rep.first_order_p);
    const double min_p2 = MpReport::min_of(rep.second_order_p);
    res.flagged += MpReport::count_above(rep.first_order_z, opt.z_limit) +
                   MpReport::count_above(rep.second_order_z, opt.z_limit);
    const bool ok = min_p1 >= first_level && min_p2 >= second_level && rep.impossible_transitions == 0;
    os << to_string(c.model.kind) << ": " << rep.first_order_cells << "+"
       << rep.second_order_cells << " cells, max z " << rep.max_first_order_z() << "/"
       << rep.max_second_order_z() << ", beyond " << opt.z_limit << " SE "
       << MpReport::count_above(rep.first_order_z, opt.z_limit) << "+"
       << MpReport::count_above(rep.second_order_z, opt.z_limit) << ", min exact p " << min_p1
       << "/" << min_p2 << " (levels " << first_level << "/" << second_level << "), impossible "
       << rep.impossible_transitions;
    if (!ok) {
      const MpCell& w = min_p1 < first_level ? rep.worst_first_order : rep.worst_second_order;
      os << " [largest z at t=" << w.t << " prev=" << w.prev << " " << w.from << "->" << w.to
         << " count=" << w.count << "/" << w.conditioning << " expected p=" << w.expected << "]";
      res.passed = false;
    }
    os << "; ";
  }
  res.detail = os.str();
  res.seconds = since(t0);
  return res;
}

CheckResult check_structural(const StructuralOptions& opt, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"structural battery", true, {}, 0.0};
  const AuctionConfig cfg = AuctionConfig::for_players(opt.m, opt.n);
  const int D = cfg.opponent_capacity;
  const int M = cfg.player_capacity;
  long cells = 0;
  int solves = 0;
  auto fail = [&](const std::string& what) {
    if (res.passed) res.detail = what;
    res.passed = false;
  };

  std::vector<OpponentModel> models;
  for (double z : opt.zmax) models.push_back(OpponentModel::uniform(z, D));
  for (double r : opt.rates) models.push_back(OpponentModel::exponential(r, D));

  std::uint64_t stream = 0;
  for (const auto& model : models) {
    const std::string tag = to_string(model.kind) + "(" +
                            std::to_string(model.kind == ModelKind::kUniform ? model.z_max : model.rate) + ")";
    std::vector<Valuation> vals;
    int horizon = 1;
    for (int i = 0; i < opt.valuations_per_model; ++i) {
      vals.push_back(sample_valuation(model, derive_seed(seed, stream++), 1, M));
      horizon = std::max(horizon, PriceGrid::for_valuation(vals.back(), opt.p_init, opt.delta_p).r_bar);
    }
    const TransitionKernel kernel = build_kernel(model, PriceGrid(opt.p_init, opt.delta_p, horizon));
    for (int t = 0; t < kernel.steps(); ++t) {
      for (int d = 0; d <= D; ++d) {
        double s = 0.0;
        for (double p : kernel.row(t, d)) s += p;
        if (std::abs(s - 1.0) > 1e-12) fail(tag + ": row sum " + std::to_string(s));
      }
    }
    const InitialDistribution init = marginal(model, opt.p_init);
    double init_sum = 0.0;
    for (double p : init) init_sum += p;
    if (std::abs(init_sum - 1.0) > 1e-12) fail(tag + ": initial law sums to " + std::to_string(init_sum));
    const SmCheck sm = check_sm(kernel);
    if (!sm.ok) fail(tag + ": stochastic monotonicity fails at t=" + std::to_string(sm.t));

    for (const Valuation& v : vals) {
      const PriceGrid grid = PriceGrid::for_valuation(v, opt.p_init, opt.delta_p);
      const Solution sol = solve(v, kernel, init, grid, cfg);
      ++solves;
      const auto& phi = sol.values.phi;
      const auto& beta = sol.policy.beta;
      for (int t = 1; t <= grid.r_bar; ++t) {
        const int sig = sb_demand(v, grid.price(t));
        const int sig_prev = sb_demand(v, grid.price(t - 1));
        for (int k = 0; k <= M; ++k) {
          const int kk = std::min(k, sig_prev);
          const double bound = utility(v, kk, grid.price(t - 1));
          for (int d = 0; d <= D; ++d) {
            ++cells;
            if (beta(t, k, d) > sig) fail(tag + ": beta above straightforward demand");
            if (phi(t, k, d) > bound + 1e-9) fail(tag + ": value above the myopic bound");
            if (sm.ok && k <= sig_prev && d < D && phi(t, k, d) < phi(t, k, d + 1) - 1e-9) {
              fail(tag + ": value increases with opponent demand at t=" + std::to_string(t));
            }
          }
        }
      }
      if (sol.policy.root_bid > sol.policy.k0) fail(tag + ": root bid above k0");
      const ValueTable red = solve_reduced(v, kernel, init, grid, cfg);
      if (std::abs(red.root - sol.values.root) > 1e-12) {
        fail(tag + ": reduced root differs by " + std::to_string((red.root - sol.values.root) * 1e12) + "e-12");
      }
      const GainTable g = exact_gain_vs_sb(spec_from_policy(sol.policy), v, kernel, init, grid, cfg);
      if (std::abs(g.root - sol.values.root) > 1e-12) fail(tag + ": exact gain differs from phi0");
    }
  }
  if (res.passed) {
    std::ostringstream os;
    os << models.size() << " models, " << solves << " solves, " << cells << " cells";
    res.detail = os.str();
  }
  res.seconds = since(t0);
  return res;
}

namespace {

// Markov opponent that bids a pseudo-random quantity in 0..min(sigma(t), own),
// fixed per (t, own, other) cell.
class RandomCappedSb final : public Strategy {
 public:
  RandomCappedSb(Valuation v, PriceGrid grid, std::uint64_t seed)
      : v_(std::move(v)), grid_(grid), seed_(seed) {}
  int bid(const Observation& obs) const override {
    const int cap = std::min(sb_demand(v_, grid_.price(obs.round)), obs.own_last);
    if (cap <= 0) return 0;
    const std::uint64_t key = (static_cast<std::uint64_t>(obs.round) << 40) ^
                              (static_cast<std::uint64_t>(obs.own_last) << 20) ^
                              static_cast<std::uint64_t>(obs.other_last + 1);
    return static_cast<int>(derive_seed(seed_, key) % static_cast<std::uint64_t>(cap + 1));
  }

 private:
  Valuation v_;
  PriceGrid grid_;
  std::uint64_t seed_;
};

struct PlayerSetup {
  Valuation v;
  PriceGrid grid;
  Solution sol;
};

PlayerSetup solve_player(const GuaranteeOptions& opt, const OpponentModel& model, std::uint64_t seed) {
  const AuctionConfig cfg = AuctionConfig::for_players(opt.m, opt.n);
  Valuation v = sample_valuation(model, seed, 1, opt.m);
  const PriceGrid grid = PriceGrid::for_valuation(v, opt.p_init, opt.delta_p);
  const TransitionKernel kernel = build_kernel(model, grid);
  Solution sol = solve(v, kernel, marginal(model, opt.p_init), grid, cfg);
  return {std::move(v), grid, std::move(sol)};
}

}  // namespace

CheckResult check_truncated_opponents(const GuaranteeOptions& opt, std::uint64_t seed) {
  const auto t0 = Clock::now();
  CheckResult res{"truncated opponents", true, {}, 0.0};
  const AuctionConfig cfg = AuctionConfig::for_players(opt.m, opt.n);
  const OpponentModel model = OpponentModel::uniform(opt.zmax, cfg.opponent_capacity);
  long comparisons = 0;
  long violations = 0;
  double worst = 0.0;
  double mean_gap = 0.0;

  for (int i = 0; i < opt.instances; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const PlayerSetup p = solve_player(opt, model, derive_seed(s, 0));
    const BellmanStrategy bellman(p.sol.policy);
    const Valuation nu = sample_valuation(model, derive_seed(s, 1), opt.n - 1, opt.m);
    const PriceGrid nu_grid = PriceGrid::for_valuation(nu, opt.p_init, opt.delta_p);
    const SbStrategy sb(nu, nu_grid);
    const double base = run_auction2({p.v, bellman, p.grid}, {nu, sb, nu_grid}, cfg.supply).utility;

    for (int j = 0; j < opt.opponents; ++j) {
      std::unique_ptr<Strategy> xi;
      if (j < cfg.opponent_capacity) {
        xi = truncated_sb_opponent(opt.p_init, opt.delta_p, j + 1)(nu).strategy;
      } else {
        xi = std::make_unique<RandomCappedSb>(nu, nu_grid, derive_seed(s, 100 + static_cast<std::uint64_t>(j)));
      }
      const double got = run_auction2({p.v, bellman, p.grid}, {nu, *xi, nu_grid}, cfg.supply).utility;
      ++comparisons;
      mean_gap += got - base;
      if (got < base - 1e-10) {
        ++violations;
        if (base - got > worst) {
          worst = base - got;
          std::ostringstream os;
          os << "instance " << i << " opponent " << j << ": " << got << " < " << base;
          res.detail = os.str();
        }
      }
    }
  }
  std::ostringstream os;
  os << comparisons << " comparisons, " << violations << " below the straightforward baseline";
  if (violations > 0) os << " (worst: " << res.detail << ")";
  os << ", mean gain change " << (comparisons ? mean_gap / static_cast<double>(comparisons) : 0.0);
  res.detail = os.str();
  res.passed = violations == 0;
  res.seconds = since(t0);
  return res;
}

MirroredReport mirrored_opponent_report(const GuaranteeOptions& opt, std::uint64_t seed) {
  const AuctionConfig cfg = AuctionConfig::for_players(opt.m, opt.n);
  const OpponentModel model = OpponentModel::uniform(opt.zmax, cfg.opponent_capacity);
  const OpponentModel player_side = model.with_capacity(opt.m);
  const InitialDistribution player_init = marginal(player_side, opt.p_init);
  const AuctionConfig opp_cfg = cfg.mirrored();

  MirroredReport rep;
  double all_diff = 0.0;
  double all_sq = 0.0;
  double all_b = 0.0;
  double all_s = 0.0;
  long total = 0;
  for (int i = 0; i < opt.instances; ++i) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(i));
    const PlayerSetup p = solve_player(opt, model, derive_seed(s, 0));
    const BellmanStrategy bellman(p.sol.policy);
    double sum = 0.0;
    double sq = 0.0;
    for (int j = 0; j < opt.draws; ++j) {
      const Valuation nu = sample_valuation(model, derive_seed(s, 1000 + static_cast<std::uint64_t>(j)), opt.n - 1, opt.m);
      const PriceGrid g = PriceGrid::for_valuation(nu, opt.p_init, opt.delta_p);
      const SbStrategy sb(nu, g);
      const TransitionKernel k = build_kernel(player_side, g);
      const Solution os = solve(nu, k, player_init, g, opp_cfg);
      const BellmanStrategy opp(os.policy);
      const double vs_sb = run_auction2({p.v, bellman, p.grid}, {nu, sb, g}, cfg.supply).utility;
      const double vs_b = run_auction2({p.v, bellman, p.grid}, {nu, opp, g}, cfg.supply).utility;
      const double diff = vs_b - vs_sb;
      sum += diff;
      sq += diff * diff;
      all_b += vs_b;
      all_s += vs_sb;
    }
    const double n = opt.draws;
    const double mean = sum / n;
    const double se = n > 1 ? std::sqrt(std::max(sq / n - mean * mean, 0.0) * n / (n - 1) / n) : 0.0;
    if (mean < 0.0) {
      ++rep.failing_instances;
      if (mean < rep.worst_diff) {
        rep.worst_diff = mean;
        rep.worst_se = se;
      }
    }
    all_diff += sum;
    all_sq += sq;
    total += opt.draws;
  }
  rep.instances = opt.instances;
  if (total > 0) {
    const double n = static_cast<double>(total);
    rep.mean_vs_bellman = all_b / n;
    rep.mean_vs_sb = all_s / n;
    rep.mean_diff = all_diff / n;
    rep.se_diff = n > 1 ? std::sqrt(std::max(all_sq / n - rep.mean_diff * rep.mean_diff, 0.0) / (n - 1)) : 0.0;
  }
  return rep;
}

CheckResult check_mirrored_opponents(const GuaranteeOptions& opt, std::uint64_t seed) {
  const auto t0 = Clock::now();
  const MirroredReport rep = mirrored_opponent_report(opt, seed);
  CheckResult res{"mirrored Bellman opponents", rep.failing_instances == 0, {}, 0.0};
  std::ostringstream os;
  os << rep.instances << " instances x " << opt.draws << " draws: vs Bellman " << rep.mean_vs_bellman
     << ", vs straightforward " << rep.mean_vs_sb << ", gap " << rep.mean_diff << " (se "
     << rep.se_diff << "), negative instances " << rep.failing_instances;
  if (rep.failing_instances > 0) os << " (worst " << rep.worst_diff << ", se " << rep.worst_se << ")";
  res.detail = os.str();
  res.seconds = since(t0);
  return res;
}

std::vector<CheckResult> run_verification(std::uint64_t seed, bool quick) {
  std::vector<CheckResult> out;
  out.push_back(check_brute_force(quick ? 10 : 50, derive_seed(seed, 1)));
  KernelCheckOptions kopt;
  if (quick) kopt.samples = 20000;
  out.push_back(check_kernel_frequencies(kopt, derive_seed(seed, 2)));
  StructuralOptions sopt;
  if (quick) sopt.valuations_per_model = 1;
  out.push_back(check_structural(sopt, derive_seed(seed, 3)));
  GuaranteeOptions gopt;
  if (quick) {
    gopt.instances = 5;
    gopt.draws = 50;
  }
  out.push_back(check_truncated_opponents(gopt, derive_seed(seed, 4)));
  out.push_back(check_mirrored_opponents(gopt, derive_seed(seed, 5)));
  return out;
}

}  // namespace clockbid
