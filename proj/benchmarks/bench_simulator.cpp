#include "fts/simulator.hpp"

#include <benchmark/benchmark.h>

namespace {

fts::HyperbolicSystem make_system(const char* a0, const char* a1) {
  std::vector<fts::Expr> a{fts::Expr::parse(a0), fts::Expr::parse(a1)};
  std::vector<fts::Expr> b{fts::Expr::parse("0.1*cos(x - t)"), fts::Expr::parse("0")};
  return fts::HyperbolicSystem(2, 1, a, b, fts::BoundaryMatrix(fts::Matrix{{0, 1}, {0, 0}}), 4.0);
}

const fts::InitialData& data() {
  static const fts::InitialData phi({fts::Expr::parse("cos(2*x) + x"), fts::Expr::parse("1 - x^2")});
  return phi;
}

void BM_EvaluateConstantSpeed(benchmark::State& state) {
  const fts::Simulator sim(make_system("1", "-2"));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.evaluate(data(), x, 1.2));
    x = x > 0.99 ? 0.0 : x + 1e-3;
  }
}
BENCHMARK(BM_EvaluateConstantSpeed);

void BM_EvaluateVariableSpeed(benchmark::State& state) {
  const fts::Simulator sim(make_system("1.25 + 0.5*sin(x + t)", "-2"));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim.evaluate(data(), x, 1.2));
    x = x > 0.99 ? 0.0 : x + 1e-3;
  }
}
BENCHMARK(BM_EvaluateVariableSpeed)->Unit(benchmark::kMillisecond);

void BM_March(benchmark::State& state) {
  const fts::Simulator sim(make_system("1", "-2"));
  for (auto _ : state) benchmark::DoNotOptimize(sim.march(data(), 4.0));
}
BENCHMARK(BM_March)->Unit(benchmark::kMillisecond);

} // namespace
