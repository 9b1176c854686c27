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

#include <benchmark/benchmark.h>

#include "clockbid/experiments.hpp"
#include "clockbid/solver.hpp"

namespace {

using namespace clockbid;

OpponentModel model_for(int kind, int capacity) {
  return kind == 0 ? OpponentModel::uniform(110, capacity) : OpponentModel::exponential(0.1, capacity);
}

void BM_BuildKernel(benchmark::State& state) {
  const OpponentModel model = model_for(static_cast<int>(state.range(0)), 33);
  const PriceGrid grid(70, 3, static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(build_kernel(model, grid));
}
BENCHMARK(BM_BuildKernel)->ArgsProduct({{0, 1}, {14, 40}});

void BM_Solve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int n = static_cast<int>(state.range(1));
  const AuctionConfig cfg = AuctionConfig::for_players(m, n);
  const OpponentModel model = OpponentModel::uniform(165, cfg.opponent_capacity);
  const Valuation v = sample_valuation(OpponentModel::uniform(165, 1), 7, 1, m);
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  const TransitionKernel kernel = build_kernel(model, grid);
  const auto init = marginal(model, 70);
  for (auto _ : state) benchmark::DoNotOptimize(solve(v, kernel, init, grid, cfg));
  state.counters["r_bar"] = grid.r_bar;
}
BENCHMARK(BM_Solve)->Args({11, 2})->Args({11, 4})->Args({11, 8})->Args({22, 4})->Unit(benchmark::kMicrosecond);

void BM_SolveReduced(benchmark::State& state) {
  const AuctionConfig cfg = AuctionConfig::for_players(11, 4);
  const OpponentModel model = OpponentModel::uniform(165, cfg.opponent_capacity);
  const Valuation v = sample_valuation(OpponentModel::uniform(165, 1), 7, 1, 11);
  const PriceGrid grid = PriceGrid::for_valuation(v, 70, 3);
  const TransitionKernel kernel = build_kernel(model, grid);
  const auto init = marginal(model, 70);
  for (auto _ : state) benchmark::DoNotOptimize(solve_reduced(v, kernel, init, grid, cfg));
}
BENCHMARK(BM_SolveReduced)->Unit(benchmark::kMicrosecond);

void BM_Experiment(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.model = state.range(0) == 0 ? ModelKind::kUniform : ModelKind::kExponential;
  cfg.runs = 200;
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.runs);
}
BENCHMARK(BM_Experiment)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
