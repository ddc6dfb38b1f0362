#include "fts/spectral.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_FindRoots(benchmark::State& state) {
  const fts::DirichletPolynomial d({{1 / 1.1, -1.0}, {1.0, 1.0}});
  const auto window = fts::default_window(d);
  for (auto _ : state) benchmark::DoNotOptimize(fts::find_roots(d, window));
}
BENCHMARK(BM_FindRoots)->Unit(benchmark::kMillisecond);

void BM_ExpandCharacteristic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  fts::Matrix p(n);
  std::vector<double> tau(n);
  for (std::size_t j = 0; j < n; ++j) {
    tau[j] = 0.5 + 0.1 * static_cast<double>(j);
    for (std::size_t k = 0; k < n; ++k) p(j, k) = 1.0 / (1.0 + static_cast<double>(j + 2 * k));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fts::expand_characteristic(p, tau));
}
BENCHMARK(BM_ExpandCharacteristic)->DenseRange(2, 8, 2);

} // namespace
