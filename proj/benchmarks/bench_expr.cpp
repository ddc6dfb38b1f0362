#include "fts/expr.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_ExprParse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(fts::Expr::parse("1.25 + 0.5*sin(2*x + 3*t) * exp(-x^2) / (1 + t)"));
}
BENCHMARK(BM_ExprParse);

void BM_ExprEval(benchmark::State& state) {
  const auto e = fts::Expr::parse("1.25 + 0.5*sin(2*x + 3*t) * exp(-x^2) / (1 + t)");
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.eval(x, 0.3));
    x += 1e-6;
  }
}
BENCHMARK(BM_ExprEval);

} // namespace
