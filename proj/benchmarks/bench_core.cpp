// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "gallager/arimoto.hpp"
#include "gallager/exponents.hpp"
#include "gallager/nts.hpp"
#include "gallager/oracle.hpp"
#include "gallager/rng.hpp"

using namespace gallager;

namespace {

Channel random_channel(RngStream& rng, std::size_t nx, std::size_t ny) {
  std::vector<std::vector<double>> rows(nx);
  for (auto& row : rows) {
    row.resize(ny);
    double sum = 0.0;
    for (double& v : row) {
      v = 0.01 + rng.uniform();
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
  return validate_channel(rows);
}

void BM_GallagerE0(benchmark::State& state) {
  RngStream rng(1);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const Channel ch = random_channel(rng, d, d);
  const Distribution q = Distribution::uniform(d);
  for (auto _ : state) benchmark::DoNotOptimize(gallager_e0(0.5, q, ch));
}
BENCHMARK(BM_GallagerE0)->Arg(4)->Arg(16)->Arg(64);

void BM_QUpdate(benchmark::State& state) {
  RngStream rng(2);
  const std::size_t d = static_cast<std::size_t>(state.range(0));
  const Channel ch = random_channel(rng, d, d);
  const Distribution q = Distribution::uniform(d);
  for (auto _ : state) benchmark::DoNotOptimize(q_update(0.1, q, ch));
}
BENCHMARK(BM_QUpdate)->Arg(4)->Arg(16)->Arg(64);

void BM_SolveBsc(benchmark::State& state) {
  const Channel ch = validate_channel({{0.8, 0.2}, {0.2, 0.8}});
  const Distribution q0({0.1, 0.9});
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(0.1, q0, ch, 1e-9, 10000).iterations());
}
BENCHMARK(BM_SolveBsc);

void BM_FavoriteType(benchmark::State& state) {
  const Channel ch = validate_channel({{0.8, 0.2}, {0.2, 0.8}});
  nts::NtsConfig cfg{0.1, Distribution({0.1, 0.9}), ch,
                     static_cast<std::uint64_t>(state.range(0)), 1, 7, 100000};
  const nts::NtsRunner runner(cfg);
  std::uint64_t trial = 0;
  for (auto _ : state) {
    RngStream rng = trial_stream(cfg.seed, trial++);
    benchmark::DoNotOptimize(runner.run_trial(rng));
  }
}
BENCHMARK(BM_FavoriteType)->Arg(50)->Arg(200);

void BM_EnumerateTypes(benchmark::State& state) {
  const Distribution q({0.2, 0.3, 0.5});
  for (auto _ : state)
    benchmark::DoNotOptimize(
        oracle::enumerate_types(static_cast<std::uint64_t>(state.range(0)), 3, q).size());
}
BENCHMARK(BM_EnumerateTypes)->Arg(50)->Arg(200);

void BM_ExhaustiveBound(benchmark::State& state) {
  RngStream rng(3);
  const Channel ch = random_channel(rng, 3, 3);
  const Distribution q({0.2, 0.3, 0.5});
  const std::vector<int> word(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        oracle::exhaustive_conditional_bound(0.5, 0.5, q, ch, word, 8));
}
BENCHMARK(BM_ExhaustiveBound)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
