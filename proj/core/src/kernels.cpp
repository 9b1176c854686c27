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

#include "clockbid/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace clockbid {

OpponentModel OpponentModel::uniform(double z_max, int capacity) {
  OpponentModel m;
  m.kind = ModelKind::kUniform;
  m.z_max = z_max;
  m.capacity = capacity;
  m.validate();
  return m;
}

OpponentModel OpponentModel::exponential(double rate, int capacity) {
  OpponentModel m;
  m.kind = ModelKind::kExponential;
  m.rate = rate;
  m.capacity = capacity;
  m.validate();
  return m;
}

OpponentModel OpponentModel::with_capacity(int c) const {
  OpponentModel m = *this;
  m.capacity = c;
  m.validate();
  return m;
}

void OpponentModel::validate() const {
  if (capacity < 0) throw std::invalid_argument("opponent capacity must be >= 0");
  switch (kind) {
    case ModelKind::kUniform:
      if (!(z_max > 0.0) || !std::isfinite(z_max)) {
        throw std::invalid_argument("uniform model needs z_max > 0");
      }
      break;
    case ModelKind::kExponential:
      if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("exponential model needs a rate > 0");
      }
      break;
  }
}

std::string to_string(ModelKind kind) {
  return kind == ModelKind::kUniform ? "uniform" : "exponential";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "uniform") return ModelKind::kUniform;
  if (name == "exponential" || name == "exp") return ModelKind::kExponential;
  throw std::invalid_argument("unknown model '" + name + "' (expected uniform|exponential)");
}

TransitionKernel::TransitionKernel(int steps, int capacity) : steps_(steps), capacity_(capacity) {
  if (steps < 0 || capacity < 0) throw std::invalid_argument("kernel dimensions must be >= 0");
  const auto w = static_cast<std::size_t>(capacity + 1);
  data_.assign(static_cast<std::size_t>(steps) * w * w, 0.0);
}

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Binomial(n, u) pmf into out[0..n].
void binomial_pmf(int n, double u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (u <= 0.0) {
    out[0] = 1.0;
    return;
  }
  if (u >= 1.0) {
    out[static_cast<std::size_t>(n)] = 1.0;
    return;
  }
  const double lu = std::log(u);
  const double lq = std::log1p(-u);
  for (int k = 0; k <= n; ++k) {
    out[static_cast<std::size_t>(k)] = std::exp(log_choose(n, k) + k * lu + (n - k) * lq);
  }
}

double poisson_pmf(double mu, int j) {
  if (mu == 0.0) return j == 0 ? 1.0 : 0.0;
  return std::exp(-mu + j * std::log(mu) - std::lgamma(j + 1.0));
}

// P(Poisson(mu) >= k). Below the mean the complement is summed instead, so
// the short side of the distribution is always the one accumulated.
double poisson_tail(double mu, int k) {
  if (k <= 0) return 1.0;
  if (mu == 0.0) return 0.0;
  double sum = 0.0;
  if (k <= mu) {
    for (int j = 0; j < k; ++j) sum += poisson_pmf(mu, j);
    return std::max(0.0, 1.0 - sum);
  }
  for (int j = k;; ++j) {
    const double term = poisson_pmf(mu, j);
    sum += term;
    if (term < 1e-18) break;
  }
  return std::min(sum, 1.0);
}

}  // namespace

TransitionKernel uniform_kernel(const OpponentModel& model, const PriceGrid& grid) {
  if (model.kind != ModelKind::kUniform) throw std::invalid_argument("expected a uniform model");
  model.validate();
  const int D = model.capacity;
  TransitionKernel k(grid.r_bar, D);
  for (int t = 0; t < grid.r_bar; ++t) {
    const Money lo = grid.price(t);
    const Money hi = grid.price(t + 1);
    const double u = model.z_max <= hi ? 0.0 : (model.z_max - hi) / (model.z_max - lo);
    for (int d = 0; d <= D; ++d) {
      binomial_pmf(d, u, k.row(t, d).first(static_cast<std::size_t>(d + 1)));
    }
  }
  return k;
}

InitialDistribution uniform_marginal(const OpponentModel& model, Money p) {
  if (model.kind != ModelKind::kUniform) throw std::invalid_argument("expected a uniform model");
  if (p < 0.0) throw std::invalid_argument("price must be >= 0");
  model.validate();
  InitialDistribution pi(static_cast<std::size_t>(model.capacity + 1));
  binomial_pmf(model.capacity, std::max(0.0, 1.0 - p / model.z_max), pi);
  return pi;
}

TransitionKernel exponential_kernel(const OpponentModel& model, const PriceGrid& grid) {
  if (model.kind != ModelKind::kExponential) {
    throw std::invalid_argument("expected an exponential model");
  }
  model.validate();
  const int D = model.capacity;
  const double mu = model.rate * grid.delta_p;
  TransitionKernel k(grid.r_bar, D);
  if (grid.r_bar == 0) return k;

  for (int d = 0; d <= D; ++d) {
    auto row = k.row(0, d);
    if (d == 0) {
      row[0] = 1.0;
      continue;
    }
    for (int to = 1; to <= d; ++to) row[static_cast<std::size_t>(to)] = poisson_pmf(mu, d - to);
    row[0] = poisson_tail(mu, d);
  }
  for (int t = 1; t < grid.r_bar; ++t) {
    for (int d = 0; d <= D; ++d) {
      auto src = k.row(0, d);
      std::copy(src.begin(), src.end(), k.row(t, d).begin());
    }
  }
  return k;
}

InitialDistribution exponential_marginal(const OpponentModel& model, Money p) {
  if (model.kind != ModelKind::kExponential) {
    throw std::invalid_argument("expected an exponential model");
  }
  if (p < 0.0) throw std::invalid_argument("price must be >= 0");
  model.validate();
  const int D = model.capacity;
  const double mu = model.rate * p;
  InitialDistribution pi(static_cast<std::size_t>(D + 1), 0.0);
  for (int d = 1; d <= D; ++d) pi[static_cast<std::size_t>(d)] = poisson_pmf(mu, D - d);
  pi[0] = poisson_tail(mu, D);
  return pi;
}

TransitionKernel build_kernel(const OpponentModel& model, const PriceGrid& grid) {
  return model.kind == ModelKind::kUniform ? uniform_kernel(model, grid)
                                           : exponential_kernel(model, grid);
}

InitialDistribution marginal(const OpponentModel& model, Money p) {
  return model.kind == ModelKind::kUniform ? uniform_marginal(model, p)
                                           : exponential_marginal(model, p);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Valuation sample_valuation(const OpponentModel& model, std::uint64_t seed, int players, int m) {
  model.validate();
  if (players < 0 || m < 0) throw std::invalid_argument("negative sample size");
  const auto count = static_cast<std::size_t>(players) * static_cast<std::size_t>(m);
  std::mt19937_64 rng(seed);
  std::vector<Money> z(count);
  if (model.kind == ModelKind::kUniform) {
    std::uniform_real_distribution<double> draw(0.0, model.z_max);
    for (auto& x : z) x = draw(rng);
    std::sort(z.begin(), z.end(), std::greater<>());
  } else {
    std::exponential_distribution<double> gap(model.rate);
    Money level = 0.0;
    for (std::size_t j = count; j-- > 0;) {
      level += gap(rng);
      z[j] = level;
    }
  }
  return Valuation(std::move(z));
}

SmCheck check_sm(const TransitionKernel& kernel) {
  const int D = kernel.capacity();
  for (int t = 0; t < kernel.steps(); ++t) {
    for (int d = 0; d < D; ++d) {
      const auto lo = kernel.row(t, d);
      const auto hi = kernel.row(t, d + 1);
      double tail_lo = 0.0;
      double tail_hi = 0.0;
      for (int s = D; s >= 0; --s) {
        tail_lo += lo[static_cast<std::size_t>(s)];
        tail_hi += hi[static_cast<std::size_t>(s)];
        if (tail_hi < tail_lo - 1e-12) return {false, t, s, d};
      }
    }
  }
  return {};
}

double MpReport::min_of(const std::vector<double>& p) {
  return p.empty() ? 1.0 : *std::min_element(p.begin(), p.end());
}

double binomial_two_sided_p(long n, long k, double p) {
  if (n < 0 || k < 0 || k > n || !(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("binomial_two_sided_p: bad arguments");
  }
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double ln_n = std::lgamma(static_cast<double>(n) + 1.0);
  auto log_pmf = [&](long j) {
    return ln_n - std::lgamma(static_cast<double>(j) + 1.0) -
           std::lgamma(static_cast<double>(n - j) + 1.0) + static_cast<double>(j) * lp +
           static_cast<double>(n - j) * lq;
  };
  // Sum the tail on the far side of the mean, where terms shrink monotonically.
  const bool upper = static_cast<double>(k) >= static_cast<double>(n) * p;
  double tail = 0.0;
  for (long j = k; upper ? j <= n : j >= 0; upper ? ++j : --j) {
    const double term = std::exp(log_pmf(j));
    tail += term;
    if (term < tail * 1e-17) break;
  }
  return std::min(1.0, 2.0 * tail);
}

int MpReport::count_above(const std::vector<double>& z, double limit) {
  return static_cast<int>(std::count_if(z.begin(), z.end(), [&](double x) { return x > limit; }));
}

MpReport check_mp_empirical(const OpponentModel& model, const PriceGrid& grid, long samples,
                            std::uint64_t seed) {
  model.validate();
  return check_mp_empirical(model, grid, build_kernel(model, grid), samples, seed);
}

MpReport check_mp_empirical(const OpponentModel& model, const PriceGrid& grid,
                            const TransitionKernel& kernel, long samples, std::uint64_t seed) {
  model.validate();
  const int D = model.capacity;
  const int R = grid.r_bar;
  const auto w = static_cast<std::size_t>(D + 1);
  if (kernel.capacity() != D || kernel.steps() < R) {
    throw std::invalid_argument("kernel does not cover the sampled grid");
  }

  // first[t][from][to], t in 0..R-1; second[t][prev][from][to], t in 1..R-1.
  std::vector<long> first(static_cast<std::size_t>(R) * w * w, 0);
  std::vector<long> second(static_cast<std::size_t>(std::max(R, 1)) * w * w * w, 0);
  auto first_at = [&](int t, int from, int to) -> long& {
    return first[(static_cast<std::size_t>(t) * w + static_cast<std::size_t>(from)) * w +
                 static_cast<std::size_t>(to)];
  };
  auto second_at = [&](int t, int prev, int from, int to) -> long& {
    return second[((static_cast<std::size_t>(t) * w + static_cast<std::size_t>(prev)) * w +
                   static_cast<std::size_t>(from)) *
                      w +
                  static_cast<std::size_t>(to)];
  };

  std::vector<int> trace(static_cast<std::size_t>(R + 1));
  for (long i = 0; i < samples; ++i) {
    const Valuation nu = sample_valuation(model, derive_seed(seed, static_cast<std::uint64_t>(i)), 1, D);
    for (int t = 0; t <= R; ++t) trace[static_cast<std::size_t>(t)] = sb_demand(nu, grid.price(t));
    for (int t = 0; t < R; ++t) {
      const int from = trace[static_cast<std::size_t>(t)];
      const int to = trace[static_cast<std::size_t>(t + 1)];
      ++first_at(t, from, to);
      if (t >= 1) ++second_at(t, trace[static_cast<std::size_t>(t - 1)], from, to);
    }
  }

  MpReport report;
  report.samples = samples;
  auto score = [&](MpCell cell, int& tested, MpCell& worst, std::vector<double>& zs,
                   std::vector<double>& ps) {
    const double p = cell.expected;
    const double n = static_cast<double>(cell.conditioning);
    if (p < 1e-300) {
      if (cell.count > 0) report.impossible_transitions += cell.count;
      return;
    }
    if (n * p < 5.0 || n * (1.0 - p) < 5.0) return;
    const double freq = cell.count / n;
    const double dev = std::abs(freq - p);
    cell.z = dev / std::sqrt(p * (1.0 - p) / n);
    ++tested;
    cell.p_value = binomial_two_sided_p(cell.conditioning, cell.count, p);
    zs.push_back(cell.z);
    ps.push_back(cell.p_value);
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    if (cell.z > worst.z || worst.t < 0) worst = cell;
  };

  for (int t = 0; t < R; ++t) {
    for (int from = 0; from <= D; ++from) {
      long n = 0;
      for (int to = 0; to <= D; ++to) n += first_at(t, from, to);
      if (n == 0) continue;
      for (int to = 0; to <= D; ++to) {
        score({t, -1, from, to, first_at(t, from, to), n, kernel(t, from, to), 0.0},
              report.first_order_cells, report.worst_first_order, report.first_order_z,
              report.first_order_p);
      }
    }
  }
  for (int t = 1; t < R; ++t) {
    for (int prev = 0; prev <= D; ++prev) {
      for (int from = 0; from <= prev; ++from) {
        long n = 0;
        for (int to = 0; to <= D; ++to) n += second_at(t, prev, from, to);
        if (n == 0) continue;
        for (int to = 0; to <= D; ++to) {
          score({t, prev, from, to, second_at(t, prev, from, to), n, kernel(t, from, to), 0.0},
                report.second_order_cells, report.worst_second_order, report.second_order_z,
                report.second_order_p);
        }
      }
    }
  }
  return report;
}

}  // namespace clockbid
