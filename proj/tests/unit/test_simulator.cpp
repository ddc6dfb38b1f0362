#include "fts/errors.hpp"
#include "fts/simulator.hpp"
#include "fts/stabtime.hpp"
#include "support/random_systems.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fts;

namespace {

std::vector<Expr> exprs(std::initializer_list<const char*> src) {
  std::vector<Expr> v;
  for (const char* s : src) v.push_back(Expr::parse(s));
  return v;
}

HyperbolicSystem make(std::initializer_list<const char*> a, std::initializer_list<const char*> b,
                      const BoundaryMatrix& p, double horizon = 12.0) {
  return HyperbolicSystem(static_cast<int>(a.size()), 1, exprs(a), exprs(b), p, horizon);
}

InitialData data(std::initializer_list<const char*> phi) { return InitialData(exprs(phi)); }

// Cubic bump supported in (0.4, 0.6) with peak 1 at 0.5.
constexpr const char* kBump = "((1 - 10*abs(x - 0.5) + abs(1 - 10*abs(x - 0.5)))/2)^3";

double bump(double x) {
  const double r = 1.0 - 10.0 * std::fabs(x - 0.5);
  return r > 0 ? r * r * r : 0.0;
}

} // namespace

TEST_SUITE("simulator") {

TEST_CASE("constant-speed feet") {
  const Simulator sim(make({"1", "-1"}, {"0", "0"}, BoundaryMatrix(Matrix(2))));
  auto f = sim.trace(0, 0.5, 0.2);
  CHECK(f.kind == FootKind::initial_line);
  CHECK(f.x == doctest::Approx(0.3));
  CHECK(f.damping == 1.0);

  f = sim.trace(0, 0.5, 2.0);
  CHECK(f.kind == FootKind::left_boundary);
  CHECK(f.x == 0.0);
  CHECK(f.t == 1.5);

  f = sim.trace(1, 0.25, 1.0);
  CHECK(f.kind == FootKind::right_boundary);
  CHECK(f.x == 1.0);
  CHECK(f.t == 0.25);

  f = sim.trace(1, 0.5, 0.0);
  CHECK(f.kind == FootKind::initial_line);
  CHECK(f.x == 0.5);

  const double eps = 0.3;
  const Simulator damped(make({"1", "-1"}, {"0.3", "0"}, BoundaryMatrix(Matrix(2))));
  CHECK(damped.trace(0, 0.5, 0.2).damping == doctest::Approx(std::exp(-0.2 * eps)));
}

TEST_CASE("variable-speed feet against closed forms") {
  // dx/dt = 1 + x: x_f = (1 + x) e^{-t} - 1, boundary crossing at w = t - ln(1 + x).
  // dx/dt = -(1 + t): x_f = x + t + t^2/2 while that is below 1.
  // b = x with a = 1 + x: damping exp(int_x^{x_f} xi/(1 + xi) dxi).
  const Simulator sim(make({"1 + x", "-(1 + t)"}, {"x", "0"}, BoundaryMatrix(Matrix(2)), 5.0));
  auto f = sim.trace(0, 0.5, 0.2);
  const double xf = 1.5 * std::exp(-0.2) - 1.0;
  REQUIRE(f.kind == FootKind::initial_line);
  CHECK(std::fabs(f.x - xf) < 1e-10);
  const double damping = std::exp((xf - std::log1p(xf)) - (0.5 - std::log1p(0.5)));
  CHECK(std::fabs(f.damping - damping) < 1e-10);

  f = sim.trace(0, 0.5, 1.0);
  REQUIRE(f.kind == FootKind::left_boundary);
  CHECK(std::fabs(f.t - (1.0 - std::log(1.5))) < 1e-10);

  f = sim.trace(1, 0.1, 0.5);
  REQUIRE(f.kind == FootKind::initial_line);
  CHECK(std::fabs(f.x - (0.1 + 0.5 + 0.125)) < 1e-10);
  CHECK(f.damping == 1.0);

  // Crossing x = 1 at w with (t - w) + (t^2 - w^2)/2 = 1 - x.
  f = sim.trace(1, 0.2, 2.0);
  REQUIRE(f.kind == FootKind::right_boundary);
  const double w = -1.0 + std::sqrt(1.0 + 2.0 * (2.0 + 2.0 - 0.8));
  CHECK(std::fabs(f.t - w) < 1e-10);
}

TEST_CASE("variable damping with a constant speed") {
  // a = 1, b = x t: along x - xi = t - s the exponent is int_x^{x_f} xi (t - x + xi) dxi.
  const Simulator sim(make({"1", "-1"}, {"x*t", "0"}, BoundaryMatrix(Matrix(2)), 5.0));
  const auto f = sim.trace(0, 0.8, 0.5);
  const double x = 0.8;
  const double xf = 0.3;
  const double c = 0.5 - x;
  auto prim = [&](double s) { return c * s * s / 2 + s * s * s / 3; };
  CHECK(f.damping == doctest::Approx(std::exp(prim(xf) - prim(x))).epsilon(1e-12));
}

TEST_CASE("bump transported through one reflection") {
  const Simulator sim(make({"1", "-1"}, {"0", "0"}, BoundaryMatrix(Matrix{{0, 1}, {0, 0}}), 4.0));
  const auto phi = InitialData(std::vector<Expr>{Expr::constant(0), Expr::parse(kBump)});
  CHECK(sim.evaluate_component(phi, 1, 0.2, 0.25) == doctest::Approx(bump(0.45)));
  CHECK(sim.evaluate_component(phi, 0, 0.3, 0.8) == doctest::Approx(bump(0.5)));
  CHECK(sim.evaluate_component(phi, 0, 0.05, 0.5) == doctest::Approx(bump(0.45)));
  for (double t : {1.61, 1.8, 2.5})
    for (double x = 0.0; x <= 1.0; x += 0.05) {
      const auto u = sim.evaluate(phi, x, t);
      CHECK(u[0] == 0.0);
      CHECK(u[1] == 0.0);
    }
}

TEST_CASE("zero data stays zero") {
  const Simulator sim(make({"1.1", "-1"}, {"0", "0"}, BoundaryMatrix(Matrix{{1, -1}, {1, -1}})));
  const double times[] = {0.0, 1.0, 5.0, 10.0};
  for (auto mode : {SolveMode::recursive, SolveMode::march})
    for (const auto& p : sim.decay_curve(InitialData::zero(2), times, mode).points) {
      CHECK(p.l2 == 0.0);
      CHECK(p.sup == 0.0);
    }
}

TEST_CASE("norm quadrature") {
  const Simulator sim(make({"1", "-1"}, {"0", "0"}, BoundaryMatrix(Matrix(2))));
  const auto p = sim.norms(data({"1", "0"}), 0.0);
  CHECK(p.l2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.sup == 1.0);
  const auto q = sim.norms(data({"x", "sin(x)"}), 0.0);
  const double exact = 1.0 / 3.0 + 0.5 - std::sin(2.0) / 4.0;
  CHECK(q.l2 * q.l2 == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("example system vanishes, perturbed one persists") {
  const BoundaryMatrix p(Matrix{{1, -1}, {1, -1}});
  const auto phi = data({"sin(3.141592653589793*x)", "sin(3.141592653589793*x)"});
  const Simulator fts_sim(make({"1", "-1"}, {"0", "0"}, p));
  CHECK(fts_sim.norms(phi, 3.05).l2 <= 1e-12);
  const Simulator perturbed(make({"1.1", "-1"}, {"0", "0"}, p));
  CHECK(perturbed.norms(phi, 10.0).l2 > 1e-3);
}

TEST_CASE("k0 = 2 example: decay after T*") {
  const Simulator sim(make({"1", "-2"}, {"0", "0"}, BoundaryMatrix(Matrix{{0, 1}, {0, 0}}), 4.0));
  const auto phi = data({"cos(2*x) + x", "1 - x^2"});
  const double times[] = {1.0, 1.45, 1.5 + 2 * sim.dt(), 2.0, 3.0};
  const auto curve = sim.decay_curve(phi, times);
  CHECK(curve.points[0].l2 > 0.1);
  CHECK(curve.points[1].l2 > 1e-3);
  for (std::size_t i = 2; i < 5; ++i) CHECK(curve.points[i].l2 <= 1e-12);
  const double bad[] = {1.0, 1.0};
  CHECK_THROWS_AS(sim.decay_curve(phi, bad), SimulationError);
}

TEST_CASE("boundary trace interpolation") {
  std::vector<double> v;
  const double dt = 0.1;
  auto cubic = [](double t) { return 1 - 2 * t + 0.5 * t * t - 3 * t * t * t; };
  for (int i = 0; i < 20; ++i) v.push_back(cubic(i * dt));
  CHECK(BoundaryTrace::interpolate(v, dt, 0.73, 20) == doctest::Approx(cubic(0.73)).epsilon(1e-13));
  CHECK(BoundaryTrace::interpolate(v, dt, 1.85, 20) == doctest::Approx(cubic(1.85)).epsilon(1e-13));
  CHECK(BoundaryTrace::interpolate(v, dt, 0.4, 20) == v[4]);
  // Linear on the first interval.
  CHECK(BoundaryTrace::interpolate(v, dt, 0.05, 20) == doctest::Approx(0.5 * (v[0] + v[1])));
  CHECK(BoundaryTrace::interpolate(v, dt, -1.0, 20) == v[0]);
  CHECK_THROWS_AS(BoundaryTrace::interpolate(v, dt, 0.5, 0), SimulationError);
}

TEST_CASE("march") {
  const Simulator zero(make({"1", "-2"}, {"0", "0"}, BoundaryMatrix(Matrix(2)), 4.0));
  const auto tr = zero.march(data({"1", "1"}), 3.0);
  for (std::size_t i = 0; i < tr.steps(); ++i) {
    CHECK(tr.component(0)[i] == 0.0);
    CHECK(tr.component(1)[i] == 0.0);
  }

  SimulationOptions coarse;
  coarse.dt = 0.6;
  const Simulator big(make({"1", "-2"}, {"0", "0"}, BoundaryMatrix(Matrix(2)), 4.0), coarse);
  CHECK_THROWS_AS(big.march(data({"1", "1"}), 1.0), SimulationError);
}

TEST_CASE("property: mode agreement at boundary grid times") {
  // Travel times 1/1.3 and 1/0.7 are not multiples of dt, so the march
  // interpolates. The data vanish to third order at both ends, which keeps
  // the boundary trace C^3 and the interpolation error O(dt^4).
  const auto sys = make({"1.3", "-0.7"}, {"0.2", "0"}, BoundaryMatrix(Matrix{{0.5, 0.3}, {0.2, -0.4}}), 6.0);
  const auto phi = data({"sin(3.141592653589793*x)^4", "x*sin(3.141592653589793*x)^4"});
  auto worst_error = [&](std::optional<double> dt) {
    SimulationOptions opts;
    opts.dt = dt;
    const Simulator sim(sys, opts);
    const auto tr = sim.march(phi, 5.0);
    double worst = 0.0;
    for (std::size_t i = 1; i < tr.steps(); i += 5) {
      const double t = static_cast<double>(i) * sim.dt();
      for (int j = 0; j < 2; ++j) {
        const double rec = sim.evaluate_component(phi, j, sys.inflow_point(j), t);
        worst = std::max(worst, std::fabs(rec - tr.component(j)[i]));
      }
    }
    return std::pair{worst, sim.dt()};
  };
  const auto [coarse, dt] = worst_error(std::nullopt);
  const auto [fine, dt_half] = worst_error(dt / 2);
  MESSAGE("march vs recursive: " << coarse << " at dt, " << fine << " at dt/2");
  CHECK(coarse <= 1e-4);
  CHECK((fine <= 1e-8 || coarse / fine >= 8.0));
  CHECK(dt_half == dt / 2);
}

TEST_CASE("property: reflection residual for a time-dependent boundary") {
  std::vector<BoundaryEntry> e{MaskedEntry{false, Expr()}, MaskedEntry{true, Expr::parse("sin(t)")},
                               MaskedEntry{false, Expr()}, MaskedEntry{false, Expr()}};
  const auto sys = make({"1", "-1"}, {"0", "0"}, BoundaryMatrix(2, e), 4.0);
  const Simulator sim(sys);
  const auto phi = data({"exp(-x)", "1 + x*(1 - x)"});
  const auto tr = sim.march(phi, 3.0);
  double max_u = 0.0;
  double worst = 0.0;
  for (std::size_t i = 1; i < tr.steps(); ++i) {
    const double t = static_cast<double>(i) * sim.dt();
    for (int j = 0; j < 2; ++j) {
      double reflected = 0.0;
      for (int k = 0; k < 2; ++k)
        reflected += sys.boundary().value(static_cast<std::size_t>(j), static_cast<std::size_t>(k), t) *
                     sim.evaluate_component(phi, k, sys.outflow_point(k), t);
      worst = std::max(worst, std::fabs(tr.component(j)[i] - reflected));
      max_u = std::max(max_u, std::fabs(reflected));
    }
  }
  CHECK(worst <= 1e-8 * (1.0 + max_u));
}

TEST_CASE("property: linearity") {
  const auto sys = make({"1 + 0.3*sin(x + t)", "-(1.2 + 0.2*cos(2*x))"}, {"0.1*x", "0.2"},
                        BoundaryMatrix(Matrix{{0.4, -0.7}, {0.9, 0.1}}), 4.0);
  const Simulator sim(sys);
  const auto phi = data({"sin(3*x)", "x^2"});
  const auto psi = data({"exp(-x)", "cos(5*x)"});
  const double alpha = 0.7;
  const double beta = -1.9;
  const auto mix = data({"0.7*sin(3*x) - 1.9*exp(-x)", "0.7*x^2 - 1.9*cos(5*x)"});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    const double x = u(rng);
    const double t = 3.0 * u(rng);
    const auto a = sim.evaluate(phi, x, t);
    const auto b = sim.evaluate(psi, x, t);
    const auto c = sim.evaluate(mix, x, t);
    for (int j = 0; j < 2; ++j)
      CHECK(std::fabs(c[static_cast<std::size_t>(j)] - (alpha * a[static_cast<std::size_t>(j)] + beta * b[static_cast<std::size_t>(j)])) <= 1e-12 * (1.0 + std::fabs(c[static_cast<std::size_t>(j)])));
  }
}

TEST_CASE("property: causality") {
  // u_1(0.3, 0.5) reads phi_2 only at x = 0.4.
  const Simulator sim(make({"1", "-2"}, {"0", "0"}, BoundaryMatrix(Matrix{{0, 1}, {0, 0}}), 4.0));
  const auto phi = data({"cos(x)", "1 - x^2"});
  const auto changed = data({"17*x^3", "1 - x^2 + ((1 - 10*abs(x - 0.75) + abs(1 - 10*abs(x - 0.75)))/2)^3"});
  for (double x : {0.1, 0.3}) {
    const double t = x + 0.2;
    CHECK(sim.evaluate_component(phi, 0, x, t) == sim.evaluate_component(changed, 0, x, t));
  }
}

TEST_CASE("property: reflection iterate identity") {
  std::mt19937_64 rng(44);
  const StripFunction probe = [](int j, double x, double t) { return 1.0 + j + x * x + std::sin(t); };
  for (int trial = 0; trial < 5; ++trial) {
    auto rs = testing_support::random_nilpotent_system(rng, 3, 12.0);
    const Simulator sim(rs.system);
    const auto rep = time_report(rs.system);
    const double t = rep.upper_bound + 0.1;
    for (int j = 0; j < 3; ++j)
      for (double x : {0.0, 0.37, 1.0}) CHECK(sim.reflection_iterate(rep.k0, probe, j, x, t) == 0.0);
  }
  // One reflection of a nonzero pattern is generally nonzero.
  const Simulator one(make({"1", "-1"}, {"0", "0"}, BoundaryMatrix(Matrix{{0, 1}, {0, 0}}), 4.0));
  CHECK(one.reflection_iterate(1, probe, 0, 0.5, 1.0) != 0.0);
  CHECK(one.reflection_iterate(2, probe, 0, 0.5, 1.0) == 0.0);
}

TEST_CASE("verify vanishing") {
  const auto family = probe_family(2);
  CHECK(family.size() == 64);

  const Simulator k1(make({"1", "-2"}, {"0", "0"}, BoundaryMatrix(Matrix(2)), 4.0));
  const auto r1 = k1.verify_vanishing(family, 1.0, 1e-10, true);
  CHECK(r1.verdict == Verdict::pass);
  CHECK(r1.exactness == Exactness::confirmed);
  REQUIRE(r1.measured_time);
  CHECK(std::fabs(*r1.measured_time - 1.0) <= 2 * k1.dt());

  const Simulator k2(make({"1", "-2"}, {"0", "0"}, BoundaryMatrix(Matrix{{0, 1}, {0, 0}}), 4.0));
  const auto r2 = k2.verify_vanishing(family, 1.5, 1e-10, true);
  CHECK(r2.verdict == Verdict::pass);
  CHECK(r2.exactness == Exactness::confirmed);
  CHECK(std::fabs(*r2.measured_time - 1.5) <= 2 * k2.dt());
  CHECK(k2.verify_vanishing(family, 1.0, 1e-10, false).verdict == Verdict::fail);
  // The check at T + 2 dt would pass the horizon.
  CHECK_THROWS_AS(k2.verify_vanishing(family, 3.99, 1e-10, false), SimulationError);

  const Simulator bad(make({"1.1", "-1"}, {"0", "0"}, BoundaryMatrix(Matrix{{1, -1}, {1, -1}})));
  CHECK(bad.verify_vanishing(probe_family(2, 8), 5.0, 1e-10, false).verdict == Verdict::fail);
}

TEST_CASE("probe family") {
  const auto fam = probe_family(3, 4);
  CHECK(fam.size() == 12);
  CHECK(fam[5](1, 0.375) == doctest::Approx(1.0));
  CHECK(fam[5](0, 0.375) == 0.0);
  CHECK(fam[5](1, 0.5) == doctest::Approx(0.125));
  CHECK(fam[5](1, 0.7) == 0.0);
  CHECK_THROWS_AS(probe_family(0), SimulationError);
}

} // TEST_SUITE
