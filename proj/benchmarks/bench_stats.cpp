// Copyright 2026 The ckassist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <vector>

#include "ckassist/rng.hpp"
#include "ckassist/stats.hpp"

namespace {

using namespace ckassist;

void BM_ClopperPearson(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    for (std::int64_t k = 0; k <= n; k += n / 8 + 1) benchmark::DoNotOptimize(stats::clopper_pearson(k, n));
  }
}
BENCHMARK(BM_ClopperPearson)->Arg(20)->Arg(500)->Arg(20000);

void BM_BinomTest(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(stats::binom_test_one_sided(n * 2 / 3, n, 0.5));
}
BENCHMARK(BM_BinomTest)->Arg(63)->Arg(1000)->Arg(100000);

void BM_BhAdjust(benchmark::State& state) {
  Rng rng(1);
  std::vector<double> p(static_cast<std::size_t>(state.range(0)));
  for (double& x : p) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(stats::bh_adjust(p));
}
BENCHMARK(BM_BhAdjust)->Arg(15)->Arg(1000);

void BM_PermWithinAcross(benchmark::State& state) {
  Rng rng(2);
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(state.range(0)), std::vector<double>(3));
  for (auto& r : rows) {
    for (double& x : r) x = 0.5 * static_cast<double>(rng.below(3));
  }
  for (auto _ : state) benchmark::DoNotOptimize(stats::perm_test_within_across(rows, 10'000, 7));
}
BENCHMARK(BM_PermWithinAcross)->Arg(2)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_Bootstrap(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> xs(200);
  for (double& x : xs) x = rng.uniform();
  for (auto _ : state) benchmark::DoNotOptimize(stats::bootstrap_ci(xs, stats::mean, 2000, 0.95, 11));
}
BENCHMARK(BM_Bootstrap)->Unit(benchmark::kMillisecond);

}  // namespace
