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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "clockbid/experiments.hpp"
#include "clockbid/kernels.hpp"
#include "clockbid/solver.hpp"
#include "clockbid/verification.hpp"

namespace {

using namespace clockbid;

// Flags shared by every subcommand that builds a model. Each one overrides
// the config file when given.
struct ModelFlags {
  std::string config;
  std::optional<std::string> model;
  std::optional<std::string> zmax;
  std::optional<std::string> lambda;
  std::optional<std::string> lambda_mode;
  std::optional<int> m;
  std::optional<int> n;
  std::optional<double> pinit;
  std::optional<double> dp;
  std::optional<long> runs;
  std::optional<long> seed;
  std::optional<std::string> out;
  std::optional<int> threads;

  void attach(CLI::App* app, bool with_runs) {
    app->add_option("--config", config, "flat key=value config file");
    app->add_option("--model", model, "uniform or exponential");
    app->add_option("--zmax", zmax, "uniform upper bound(s), comma separated");
    app->add_option("--lambda", lambda, "exponential parameter(s), comma separated");
    app->add_option("--lambda-mode", lambda_mode, "scale (mean slope gap) or rate");
    app->add_option("--m", m, "items for sale");
    app->add_option("--n", n, "number of players");
    app->add_option("--pinit", pinit, "opening price");
    app->add_option("--dp", dp, "price increment");
    app->add_option("--seed", seed, "base seed");
    app->add_option("--out", out, "output path");
    if (with_runs) {
      app->add_option("--runs", runs, "Monte Carlo runs per parameter");
      app->add_option("--threads", threads, "worker threads");
    }
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    auto set = [&](const char* key, const auto& v) {
      if (!v) return;
      std::ostringstream os;
      os << std::setprecision(17) << *v;
      apply_setting(cfg, key, os.str());
    };
    set("model", model);
    set("zmax", zmax);
    set("lambda", lambda);
    set("lambda_mode", lambda_mode);
    set("m", m);
    set("n", n);
    set("pinit", pinit);
    set("dp", dp);
    set("runs", runs);
    set("seed", seed);
    set("out", out);
    set("threads", threads);
    cfg.validate();
    return cfg;
  }
};

// Writes to the file named by cfg.out, or stdout when it is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_slopes(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int cmd_solve(const ModelFlags& flags, const std::string& slopes) {
  const ExperimentConfig cfg = flags.resolve();
  const AuctionConfig acfg = AuctionConfig::for_players(cfg.m, cfg.n);
  const OpponentModel model = cfg.model_for(cfg.params().front(), acfg.opponent_capacity);

  const Valuation v = slopes.empty()
                          ? sample_valuation(model, derive_seed(cfg.seed, 0), 1, cfg.m)
                          : concave_hull(RawValuation{[&] {
                              std::vector<double> values{0.0};
                              for (double z : parse_slopes(slopes)) values.push_back(values.back() + z);
                              return values;
                            }()});
  if (v.size() != cfg.m) throw std::invalid_argument("--valuation must list exactly m slopes");
  const PriceGrid grid = PriceGrid::for_valuation(v, cfg.p_init, cfg.delta_p);
  const TransitionKernel kernel = build_kernel(model, grid);
  const Solution sol = solve(v, kernel, marginal(model, cfg.p_init), grid, acfg);

  Sink sink(cfg.out);
  auto& os = sink.get();
  os << std::setprecision(12);
  os << "t,k,delta,phi,beta\n";
  os << 0 << ',' << sol.policy.k0 << ',' << -1 << ',' << sol.values.root << ','
     << sol.policy.root_bid << '\n';
  const auto& phi = sol.values.phi;
  for (int t = 1; t <= grid.r_bar; ++t) {
    for (int k = 0; k <= acfg.player_capacity; ++k) {
      for (int d = 0; d <= acfg.opponent_capacity; ++d) {
        os << t << ',' << k << ',' << d << ',' << phi(t, k, d) << ',' << sol.policy.beta(t, k, d)
           << '\n';
      }
    }
  }
  std::cerr << "r_bar=" << grid.r_bar << " k0=" << sol.policy.k0 << " root_bid="
            << sol.policy.root_bid << " phi0=" << sol.values.root << '\n';
  return 0;
}

int cmd_simulate(const ModelFlags& flags, bool baseline) {
  const ExperimentConfig cfg = flags.resolve();
  const ExperimentResult res = baseline ? sb_baseline(cfg) : run_experiment(cfg);
  write_outputs(cfg, res);

  std::printf("%-8s %7s %9s %9s %7s %8s %8s %9s %7s %5s\n", "param", "runs", "mean_U", "mean_Uhat",
              "ratio", "P(U=Uh)", "P(.8U)", "mean_Usb", "sb_rat", "viol");
  for (const auto& s : res.summaries) {
    std::printf("%-8g %7ld %9.3f %9.3f %6.2f%% %7.2f%% %7.2f%% %9.3f %6.2f%% %5ld\n", s.param,
                s.runs, s.mean_u, s.mean_u_hat, 100 * s.ratio, 100 * s.p_equal, 100 * s.p_80,
                s.mean_u_sb, 100 * s.sb_ratio, s.dominance_violations);
  }
  if (res.violations() > 0) {
    std::fprintf(stderr, "dominance violated in %ld runs\n", res.violations());
    return 2;
  }
  return 0;
}

int cmd_verify(long seed, bool quick) {
  const auto results = run_verification(static_cast<std::uint64_t>(seed), quick);
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%s  %-28s %6.1fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

int cmd_kernel_dump(const ModelFlags& flags, int rounds, bool initial) {
  const ExperimentConfig cfg = flags.resolve();
  const AuctionConfig acfg = AuctionConfig::for_players(cfg.m, cfg.n);
  const OpponentModel model = cfg.model_for(cfg.params().front(), acfg.opponent_capacity);
  const TransitionKernel kernel = build_kernel(model, PriceGrid(cfg.p_init, cfg.delta_p, rounds));

  Sink sink(cfg.out);
  auto& os = sink.get();
  os << std::setprecision(17);
  os << "t,delta,delta_next,prob\n";
  if (initial) {
    const auto init = marginal(model, cfg.p_init);
    for (int d = 0; d <= acfg.opponent_capacity; ++d) {
      if (init[static_cast<std::size_t>(d)] > 0.0) os << -1 << ',' << -1 << ',' << d << ',' << init[static_cast<std::size_t>(d)] << '\n';
    }
  }
  for (int t = 0; t < kernel.steps(); ++t) {
    for (int d = 0; d <= kernel.capacity(); ++d) {
      for (int to = 0; to <= d; ++to) {
        const double p = kernel(t, d, to);
        if (p > 0.0) os << t << ',' << d << ',' << to << ',' << p << '\n';
      }
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clock auction bidding: solver, simulator and checks"};
  app.require_subcommand(1);

  ModelFlags solve_flags;
  std::string slopes;
  auto* solve_cmd = app.add_subcommand("solve", "solve the bidding recursion and dump phi and beta as CSV");
  solve_flags.attach(solve_cmd, false);
  solve_cmd->add_option("--valuation", slopes, "explicit marginal values, comma separated");

  ModelFlags sim_flags;
  bool baseline = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo comparison against the oracle");
  sim_flags.attach(sim_cmd, true);
  sim_cmd->add_flag("--baseline", baseline, "play only the straightforward strategy");

  long verify_seed = 7;
  bool quick = false;
  auto* verify_cmd = app.add_subcommand("verify", "run the property battery");
  verify_cmd->add_option("--seed", verify_seed, "base seed");
  verify_cmd->add_flag("--quick", quick, "smaller sample sizes");

  auto* kernel_cmd = app.add_subcommand("kernel", "transition kernel utilities");
  kernel_cmd->require_subcommand(1);
  ModelFlags kernel_flags;
  int rounds = 20;
  bool initial = false;
  auto* dump_cmd = kernel_cmd->add_subcommand("dump", "dump kernel entries as CSV");
  kernel_flags.attach(dump_cmd, false);
  dump_cmd->add_option("--rounds", rounds, "number of steps")->check(CLI::PositiveNumber);
  dump_cmd->add_flag("--initial", initial, "also emit the opening law as t=-1 rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve_cmd) return cmd_solve(solve_flags, slopes);
    if (*sim_cmd) return cmd_simulate(sim_flags, baseline);
    if (*verify_cmd) return cmd_verify(verify_seed, quick);
    if (*dump_cmd) return cmd_kernel_dump(kernel_flags, rounds, initial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
