#include "fts/graph_criteria.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

fts::SignPattern strictly_upper(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution edge(0.5);
  fts::SignPattern w(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) w.set(j, k, edge(rng));
  return w;
}

void BM_PrincipalMinors(benchmark::State& state) {
  const auto w = strictly_upper(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(fts::principal_minors_all_zero(w));
}
BENCHMARK(BM_PrincipalMinors)->DenseRange(4, 16, 4);

void BM_Nilpotency(benchmark::State& state) {
  const auto w = strictly_upper(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(fts::nilpotency_index(w));
}
BENCHMARK(BM_Nilpotency)->RangeMultiplier(2)->Range(4, 64);

} // namespace
