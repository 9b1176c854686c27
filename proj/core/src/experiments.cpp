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

#include "clockbid/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "clockbid/oracle.hpp"
#include "clockbid/solver.hpp"

namespace clockbid {

std::string to_string(LambdaMode mode) { return mode == LambdaMode::kScale ? "scale" : "rate"; }

LambdaMode parse_lambda_mode(const std::string& name) {
  if (name == "scale" || name == "mean") return LambdaMode::kScale;
  if (name == "rate") return LambdaMode::kRate;
  throw std::invalid_argument("unknown lambda mode '" + name + "' (expected scale or rate)");
}

void ExperimentConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (runs < 1) throw std::invalid_argument("runs must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (!(p_init >= 0.0) || !(delta_p > 0.0)) {
    throw std::invalid_argument("price grid needs p_init >= 0 and dp > 0");
  }
  if (params().empty()) throw std::invalid_argument("parameter grid is empty");
  for (double x : params()) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("parameters must be positive");
  }
}

OpponentModel ExperimentConfig::model_for(double param, int capacity) const {
  if (model == ModelKind::kUniform) return OpponentModel::uniform(param, capacity);
  const double rate = lambda_mode == LambdaMode::kScale ? 1.0 / param : param;
  return OpponentModel::exponential(rate, capacity);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": not a number: '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e15) {
    throw std::invalid_argument(key + ": not an integer: '" + v + "'");
  }
  return static_cast<long>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw std::invalid_argument(key + ": empty list");
  return out;
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
  const std::string key = trim(key_in);
  const std::string value = trim(value_in);
  if (key == "model") {
    cfg.model = parse_model_kind(value);
  } else if (key == "zmax") {
    cfg.zmax = to_list(key, value);
  } else if (key == "lambda") {
    cfg.lambda = to_list(key, value);
  } else if (key == "lambda_mode") {
    cfg.lambda_mode = parse_lambda_mode(value);
  } else if (key == "m") {
    cfg.m = static_cast<int>(to_long(key, value));
  } else if (key == "n") {
    cfg.n = static_cast<int>(to_long(key, value));
  } else if (key == "pinit" || key == "p_init") {
    cfg.p_init = to_double(key, value);
  } else if (key == "dp" || key == "delta_p") {
    cfg.delta_p = to_double(key, value);
  } else if (key == "runs" || key == "N") {
    cfg.runs = to_long(key, value);
  } else if (key == "seed") {
    const long s = to_long(key, value);
    if (s < 0) throw std::invalid_argument("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(to_long(key, value));
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    apply_setting(base, s.substr(0, eq), s.substr(eq + 1));
  }
  return base;
}

long ExperimentResult::violations() const {
  long total = 0;
  for (const auto& s : summaries) total += s.dominance_violations;
  return total;
}

namespace {

// Per-thread cache: the kernel only depends on prices, so one built for the
// longest horizon seen so far serves every shorter one.
class KernelCache {
 public:
  explicit KernelCache(OpponentModel model) : model_(model) {}

  const TransitionKernel& get(Money p_init, Money delta_p, int r_bar) {
    if (r_bar > kernel_.steps() || kernel_.capacity() != model_.capacity) {
      int steps = std::max(r_bar, 2 * kernel_.steps());
      kernel_ = build_kernel(model_, PriceGrid(p_init, delta_p, steps));
    }
    return kernel_;
  }

 private:
  OpponentModel model_;
  TransitionKernel kernel_;
};

struct Sampled {
  Valuation v;
  Valuation nu;
};

Sampled sample_pair(const ExperimentConfig& cfg, const OpponentModel& model, std::uint64_t seed) {
  return {sample_valuation(model, derive_seed(seed, 0), 1, cfg.m),
          sample_valuation(model, derive_seed(seed, 1), cfg.n - 1, cfg.m)};
}

void play_run(const ExperimentConfig& cfg, double param, long i, bool with_bellman,
              KernelCache& cache, const InitialDistribution& init, RunRecord& rec) {
  const AuctionConfig acfg = AuctionConfig::for_players(cfg.m, cfg.n);
  const OpponentModel model = cfg.model_for(param, acfg.opponent_capacity);
  rec.param = param;
  rec.run = i;
  rec.seed = cfg.seed + static_cast<std::uint64_t>(i);
  const Sampled s = sample_pair(cfg, model, rec.seed);
  const PriceGrid grid = PriceGrid::for_valuation(s.v, cfg.p_init, cfg.delta_p);
  const std::vector<int> trace = sb_trace(s.nu, cfg.p_init, cfg.delta_p);

  const OracleResult oracle = oracle_bid(s.v, s.nu, grid, acfg);
  rec.u = oracle.utility_u;
  rec.tau_oracle = oracle.tau;

  const SbStrategy sb(s.v, grid);
  const AuctionOutcome sb_out = run_auction(s.v, sb, trace, acfg, grid);
  rec.u_sb = sb_out.utility;
  rec.tau_sb = sb_out.tau;

  if (with_bellman) {
    const TransitionKernel& kernel = cache.get(cfg.p_init, cfg.delta_p, grid.r_bar);
    const Solution sol = solve(s.v, kernel, init, grid, acfg);
    const BellmanStrategy bellman(sol.policy);
    const AuctionOutcome out = run_auction(s.v, bellman, trace, acfg, grid);
    rec.u_hat = out.utility;
    rec.tau_bellman = out.tau;
  } else {
    rec.u_hat = rec.u_sb;
    rec.tau_bellman = rec.tau_sb;
  }
}

ExperimentResult run_protocol(const ExperimentConfig& cfg, bool with_bellman) {
  cfg.validate();
  const AuctionConfig acfg = AuctionConfig::for_players(cfg.m, cfg.n);
  ExperimentResult result;
  const auto runs = static_cast<std::size_t>(cfg.runs);
  for (double param : cfg.params()) {
    const OpponentModel model = cfg.model_for(param, acfg.opponent_capacity);
    const InitialDistribution init = marginal(model, cfg.p_init);
    std::vector<RunRecord> recs(runs);

    const int workers = static_cast<int>(std::min<long>(cfg.threads, cfg.runs));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
      try {
        KernelCache cache(model);
        for (std::size_t i = static_cast<std::size_t>(w); i < runs;
             i += static_cast<std::size_t>(workers)) {
          play_run(cfg, param, static_cast<long>(i), with_bellman, cache, init, recs[i]);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }

    result.summaries.push_back(summarize(param, recs));
    result.runs.insert(result.runs.end(), recs.begin(), recs.end());
  }
  return result;
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

double se_of(const std::vector<double>& x, double mean) {
  if (x.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

constexpr double kEqualTol = 1e-9;

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) { return run_protocol(cfg, true); }

ExperimentResult sb_baseline(const ExperimentConfig& cfg) { return run_protocol(cfg, false); }

ParamSummary summarize(double param, const std::vector<RunRecord>& runs) {
  ParamSummary s;
  s.param = param;
  s.runs = static_cast<long>(runs.size());
  std::vector<double> u, uh, us, eq, p80;
  for (const auto& r : runs) {
    u.push_back(r.u);
    uh.push_back(r.u_hat);
    us.push_back(r.u_sb);
    eq.push_back(std::abs(r.u - r.u_hat) <= kEqualTol ? 1.0 : 0.0);
    p80.push_back(r.u_hat >= 0.8 * r.u - kEqualTol ? 1.0 : 0.0);
    if (r.u_hat > r.u || r.u_sb > r.u || r.u_hat < 0.0) ++s.dominance_violations;
  }
  s.mean_u = mean_of(u);
  s.mean_u_hat = mean_of(uh);
  s.mean_u_sb = mean_of(us);
  s.se_u = se_of(u, s.mean_u);
  s.se_u_hat = se_of(uh, s.mean_u_hat);
  s.se_u_sb = se_of(us, s.mean_u_sb);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.ratio = s.mean_u > 0.0 ? s.mean_u_hat / s.mean_u : nan;
  s.sb_ratio = s.mean_u > 0.0 ? s.mean_u_sb / s.mean_u : nan;
  s.p_equal = mean_of(eq);
  s.p_80 = mean_of(p80);
  s.se_p_equal = se_of(eq, s.p_equal);
  s.se_p_80 = se_of(p80, s.p_80);
  return s;
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& runs) {
  os << "param,run,seed,U,U_hat,tau_oracle,tau_bellman,U_sb,tau_sb\n";
  os << std::setprecision(17);
  for (const auto& r : runs) {
    os << r.param << ',' << r.run << ',' << r.seed << ',' << r.u << ',' << r.u_hat << ','
       << r.tau_oracle << ',' << r.tau_bellman << ',' << r.u_sb << ',' << r.tau_sb << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<ParamSummary>& summaries) {
  os << "param,runs,mean_U,se_U,mean_U_hat,se_U_hat,ratio,p_equal,se_p_equal,p_80,se_p_80,"
        "mean_U_sb,se_U_sb,sb_ratio,violations\n";
  os << std::setprecision(10);
  for (const auto& s : summaries) {
    os << s.param << ',' << s.runs << ',' << s.mean_u << ',' << s.se_u << ',' << s.mean_u_hat << ','
       << s.se_u_hat << ',' << s.ratio << ',' << s.p_equal << ',' << s.se_p_equal << ',' << s.p_80
       << ',' << s.se_p_80 << ',' << s.mean_u_sb << ',' << s.se_u_sb << ',' << s.sb_ratio << ','
       << s.dominance_violations << '\n';
  }
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  if (cfg.out.empty()) return;
  const std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  std::ofstream runs(dir / "runs.csv");
  std::ofstream summary(dir / "summary.csv");
  if (!runs || !summary) throw std::runtime_error("cannot write into " + dir.string());
  write_runs_csv(runs, result.runs);
  write_summary_csv(summary, result.summaries);
  if (!runs || !summary) throw std::runtime_error("write failed in " + dir.string());
}

}  // namespace clockbid
