/*
 * Copyright 2026 The shapreg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "shapreg/coalition_game.hpp"
#include "shapreg/shapley_regression.hpp"

namespace {

using namespace shapreg;

PartnerDataset MakeDataset(int m, int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z(0.0, 1.0);
  Matrix x(m, n);
  std::vector<double> y(m, 0.0);
  std::vector<std::string> names, dates;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  for (int r = 0; r < m; ++r) dates.push_back(std::to_string(r));
  for (int r = 0; r < m; ++r) {
    const double common = z(rng);
    for (int i = 0; i < n; ++i) {
      x(r, i) = 10.0 + common + z(rng);
      y[r] += (1.0 + 0.1 * i) * x(r, i);
    }
    y[r] += z(rng);
  }
  return PartnerDataset(dates, PlayerList::FromNames(names), std::move(x), std::move(y));
}

CoalitionPayoffTable MakeGame(int n) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  std::vector<double> payoffs(size_t{1} << n);
  for (double& p : payoffs) p = u(rng);
  return CoalitionPayoffTable(PlayerList::FromNames(names), payoffs);
}

void BM_SweepSerial(benchmark::State& state) {
  const auto d = MakeDataset(130, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(CoalitionR2SweepSerial(d));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto d = MakeDataset(130, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(CoalitionR2Sweep(d));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ShapleySerial(benchmark::State& state) {
  const auto game = MakeGame(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ShapleyValuesSerial(game, {.with_breakdowns = false}));
  }
}

void BM_ShapleyParallel(benchmark::State& state) {
  const auto game = MakeGame(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ShapleyValues(game, {.with_breakdowns = false}));
  }
  state.counters["threads"] = omp_get_max_threads();
}

BENCHMARK(BM_SweepSerial)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->DenseRange(6, 12, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShapleySerial)->DenseRange(10, 20, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShapleyParallel)->DenseRange(10, 20, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
