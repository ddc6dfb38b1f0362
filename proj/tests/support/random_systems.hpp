#pragma once

// Random robustly stabilizable systems: W is strictly triangular after a
// random relabelling, speeds and dampings are smooth and depend on (x, t).

#include "fts/model.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>
#include <string>

namespace testing_support {

struct RandomSystem {
  fts::HyperbolicSystem system;
  fts::InitialData phi;
};

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Nilpotent W with entries uniform in [-2, 2] (bounded away from 0) and
// |a_j| = 1.25 + 0.5 sin(...) in [0.75, 1.75].
inline RandomSystem random_nilpotent_system(std::mt19937_64& rng, int n, double horizon) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> m_dist(0, n);
  const int m = m_dist(rng);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const double density = 0.3 + 0.7 * unit(rng);

  fts::Matrix p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) {
      if (unit(rng) > density) continue;
      double v = 2.0 * u(rng);
      if (std::abs(v) < 0.1) v = v < 0 ? -0.1 : 0.1;
      p(static_cast<std::size_t>(order[static_cast<std::size_t>(i)]),
        static_cast<std::size_t>(order[static_cast<std::size_t>(k)])) = v;
    }

  std::vector<fts::Expr> a;
  std::vector<fts::Expr> b;
  std::vector<fts::Expr> phi;
  for (int j = 0; j < n; ++j) {
    const std::string mag = "(1.25 + 0.5*sin(" + fmt(1.0 + 2.0 * unit(rng)) + "*x + " +
                            fmt(u(rng)) + "*t + " + fmt(3.0 * u(rng)) + "))";
    a.push_back(fts::Expr::parse(j < m ? mag : "-" + mag));
    b.push_back(fts::Expr::parse(fmt(0.5 * u(rng)) + "*cos(" + fmt(2.0 * u(rng)) + "*x - " +
                                 fmt(u(rng)) + "*t)"));
    phi.push_back(fts::Expr::parse("1 + sin(" + fmt(3.0 * u(rng)) + "*x + " + fmt(u(rng)) + ")"));
  }
  return {fts::HyperbolicSystem(n, m, std::move(a), std::move(b), fts::BoundaryMatrix(p), horizon),
          fts::InitialData(std::move(phi))};
}

} // namespace testing_support
