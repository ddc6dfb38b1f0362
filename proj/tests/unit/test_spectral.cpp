#include "fts/errors.hpp"
#include "fts/graph_criteria.hpp"
#include "fts/spectral.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace fts;

namespace {

std::vector<Expr> exprs(std::initializer_list<const char*> src) {
  std::vector<Expr> v;
  for (const char* s : src) v.push_back(Expr::parse(s));
  return v;
}

HyperbolicSystem two_by_two(std::initializer_list<const char*> a, std::initializer_list<const char*> b,
                            const Matrix& p) {
  return HyperbolicSystem(2, 1, exprs(a), exprs(b), BoundaryMatrix(p), 10.0);
}

const Matrix kExampleP{{1, -1}, {1, -1}};

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("travel times") {
  CHECK(compute_travel_times(two_by_two({"1", "-1"}, {"0", "0"}, kExampleP)).tau == std::vector<double>{1, 1});
  const auto tt = compute_travel_times(two_by_two({"1.1", "-1"}, {"0", "0"}, kExampleP));
  CHECK(tt.tau[0] == doctest::Approx(1 / 1.1).epsilon(1e-15));
  CHECK(tt.alpha1[0] < 0.0);
  CHECK(compute_travel_times(two_by_two({"2", "-2"}, {"0", "0"}, kExampleP)).tau == std::vector<double>{0.5, 0.5});
  // int_0^1 dx/(1+x) = ln 2; int_0^1 dx/(2+cos x) by quadrature against its antiderivative.
  const auto var = compute_travel_times(two_by_two({"1 + x", "-(2 + cos(x))"}, {"0", "0"}, kExampleP));
  CHECK(std::fabs(var.tau[0] - std::numbers::ln2) < 1e-13);
  const double exact = 2.0 / std::sqrt(3.0) * std::atan(std::tan(0.5) / std::sqrt(3.0));
  CHECK(std::fabs(var.tau[1] - exact) < 1e-13);
  CHECK_THROWS_AS(compute_travel_times(two_by_two({"1 + t", "-1"}, {"0", "0"}, kExampleP)), ModelError);
}

TEST_CASE("boundary transform") {
  const auto plain = transform_boundary(two_by_two({"1", "-1"}, {"0", "0"}, kExampleP));
  CHECK(plain.p1 == kExampleP);

  const double eps = 0.05;
  const auto damped = transform_boundary(two_by_two({"1", "-1"}, {"0.05", "0"}, kExampleP));
  CHECK(damped.beta[0] == doctest::Approx(eps));
  CHECK(damped.p1(0, 0) == doctest::Approx(std::exp(-eps)));
  CHECK(damped.p1(1, 0) == doctest::Approx(std::exp(-eps)));
  CHECK(damped.p1(0, 1) == -1.0);
  CHECK(damped.p1(1, 1) == -1.0);

  const auto right = transform_boundary(two_by_two({"1", "-1"}, {"0", "1"}, kExampleP));
  CHECK(right.beta[1] == doctest::Approx(-1.0));
  CHECK(right.p1(1, 0) == doctest::Approx(std::exp(-1.0)));
  CHECK(right.p1(1, 1) == doctest::Approx(-std::exp(-1.0)));
  CHECK(right.p1(0, 0) == 1.0);

  // beta = int_0^1 x/(1+x) dx = 1 - ln 2.
  const auto quad = transform_boundary(two_by_two({"1 + x", "-1"}, {"x", "0"}, kExampleP));
  CHECK(std::fabs(quad.beta[0] - (1.0 - std::numbers::ln2)) < 1e-13);
  CHECK(sign_pattern(quad.p1) == sign_pattern(kExampleP));
}

TEST_CASE("expansion of the example triple") {
  CHECK(is_spectrum_empty(expand_characteristic(kExampleP, {1.0, 1.0})));

  const auto speed = expand_characteristic(kExampleP, {1 / 1.1, 1.0});
  REQUIRE(speed.terms().size() == 2);
  CHECK(speed.terms()[0].r == doctest::Approx(1 / 1.1));
  CHECK(speed.terms()[0].coeff == -1.0);
  CHECK(speed.terms()[1].r == 1.0);
  CHECK(speed.terms()[1].coeff == 1.0);

  const auto damped = transform_boundary(two_by_two({"1", "-1"}, {"0.05", "0"}, kExampleP));
  const auto d = expand_characteristic(damped.p1, {1.0, 1.0});
  REQUIRE(d.terms().size() == 1);
  CHECK(d.terms()[0].r == 1.0);
  CHECK(d.terms()[0].coeff == doctest::Approx(1.0 - std::exp(-0.05)));

  CHECK(is_spectrum_empty(expand_characteristic(Matrix{{0, 2, 3}, {0, 0, -1}, {0, 0, 0}}, {0.3, 0.7, 1.1})));
}

TEST_CASE("nearly equal exponents merge") {
  const auto d = expand_characteristic(kExampleP, {1.0, 1.0 + 1e-12});
  CHECK(is_spectrum_empty(d));
  CHECK_FALSE(is_spectrum_empty(expand_characteristic(kExampleP, {1.0, 1.0 + 1e-6})));
}

TEST_CASE("property: expansion matches the direct determinant") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> size(1, 5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    Matrix p(n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) p(j, k) = 2.0 * u(rng);
    std::vector<double> tau(n);
    for (auto& t : tau) t = 0.2 + 1.8 * (0.5 + 0.5 * u(rng));
    const auto d = expand_characteristic(p, tau);
    for (int s = 0; s < 20; ++s) {
      const complex lambda = std::polar(5.0 * (0.5 + 0.5 * u(rng)), std::numbers::pi * u(rng));
      const double err = std::abs(d(lambda) - oracle::direct_characteristic(p, tau, lambda));
      // Left of the imaginary axis the terms grow like exp(|Re lambda| sum tau), so
      // the absolute error is measured against the size of the expanded product.
      double scale = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        double row = 0.0;
        for (std::size_t k = 0; k < n; ++k) row += std::fabs(p(j, k));
        scale *= 1.0 + std::exp(-lambda.real() * tau[j]) * row;
      }
      if (lambda.real() >= 0.0) CHECK(err <= 1e-9 * (1.0 + p.max_abs()));
      CHECK(err <= 1e-12 * scale);
    }
  }
}

TEST_CASE("property: robust implies empty spectrum") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Matrix p(4);
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = j + 1; k < 4; ++k) p(j, k) = u(rng);
    if (!robust_fts_report(BoundaryMatrix(p)).robust_fts) continue;
    for (int s = 0; s < 10; ++s) {
      std::vector<double> tau{1.0 + u(rng) / 4, 1.0 + u(rng) / 4, 1.0 + u(rng) / 4, 1.0 + u(rng) / 4};
      CHECK(is_spectrum_empty(expand_characteristic(p, tau)));
    }
  }
}

TEST_CASE("roots of 1 - exp(-lambda)") {
  const DirichletPolynomial d({{1.0, -1.0}});
  const auto res = find_roots(d, {-1, 1, -7, 7});
  REQUIRE(res.roots.size() == 3);
  CHECK(std::abs(res.roots[0].value - complex(0, -2 * std::numbers::pi)) < 1e-10);
  CHECK(std::abs(res.roots[1].value) < 1e-10);
  CHECK(std::abs(res.roots[2].value - complex(0, 2 * std::numbers::pi)) < 1e-10);
  CHECK(res.total_winding == 3);
}

TEST_CASE("roots of 1 + exp(-lambda)") {
  const DirichletPolynomial d({{1.0, 1.0}});
  const auto res = find_roots(d, {-1, 1, -4, 4});
  REQUIRE(res.roots.size() == 2);
  CHECK(std::abs(res.roots[0].value - complex(0, -std::numbers::pi)) < 1e-10);
  CHECK(std::abs(res.roots[1].value - complex(0, std::numbers::pi)) < 1e-10);
  for (const auto& r : res.roots) CHECK(r.winding == 1);
}

TEST_CASE("roots of the speed-perturbed example") {
  const auto d = expand_characteristic(kExampleP, {1 / 1.1, 1.0});
  const Window w{-20, 5, 0, 40};
  const auto res = find_roots(d, w);
  CHECK_FALSE(res.roots.empty());
  CHECK(res.failed_boxes == 0);
  for (const auto& r : res.roots) {
    CHECK(std::abs(d(r.value)) <= 1e-10);
    CHECK(r.winding == 1);
    CHECK(w.contains(r.value));
  }
  CHECK(static_cast<int>(res.roots.size()) == oracle::fine_winding(d, w, 20000));
  // Roots are distinct.
  for (std::size_t i = 1; i < res.roots.size(); ++i)
    CHECK(std::abs(res.roots[i].value - res.roots[i - 1].value) > 1e-6);
}

TEST_CASE("zero on the window edge is handled") {
  // 1 - exp(-lambda) vanishes at 0, a corner of this window.
  const DirichletPolynomial d({{1.0, -1.0}});
  const auto res = find_roots(d, {0, 1, 0, 7});
  bool found_zero = false;
  for (const auto& r : res.roots) found_zero = found_zero || std::abs(r.value) < 1e-8;
  CHECK(found_zero);
}

TEST_CASE("default window") {
  const auto d = expand_characteristic(kExampleP, {1 / 1.1, 1.0});
  const Window w = default_window(d);
  CHECK(w.re0 == doctest::Approx(-10 * 1.1 * std::log(3.0)));
  CHECK(w.re1 == doctest::Approx(1.1 * std::log(3.0)));
  CHECK(w.im0 == 0.0);
  CHECK(w.im1 == doctest::Approx(55.0));
  CHECK_THROWS_AS(find_roots(DirichletPolynomial(), w), RootFindingError);
  CHECK_THROWS_AS(find_roots(d, {1, 0, 0, 1}), RootFindingError);
}

TEST_CASE("spectrum report") {
  const auto empty = spectrum_report(two_by_two({"1", "-1"}, {"0", "0"}, kExampleP));
  CHECK(empty.empty);
  CHECK(empty.fts);
  CHECK(empty.roots.roots.empty());

  const auto speed = spectrum_report(two_by_two({"1.1", "-1"}, {"0", "0"}, kExampleP));
  CHECK_FALSE(speed.fts);
  CHECK(speed.roots.roots.size() >= 3);
  for (const auto& r : speed.roots.roots) CHECK(r.residual <= 1e-10);

  const auto damped = spectrum_report(two_by_two({"1", "-1"}, {"0.05", "0"}, kExampleP));
  CHECK_FALSE(damped.empty);
  // Zeros of 1 + (1 - e^{-0.05}) e^{-lambda} sit at Re = ln(1 - e^{-0.05}).
  const auto found = spectrum_report(two_by_two({"1", "-1"}, {"0.05", "0"}, kExampleP),
                                     Window{-4, 0, 0, 10});
  REQUIRE(found.roots.roots.size() == 2);
  for (const auto& r : found.roots.roots)
    CHECK(r.value.real() == doctest::Approx(std::log(1.0 - std::exp(-0.05))));

  CHECK_THROWS_AS(spectrum_report(two_by_two({"1", "-1"}, {"t", "0"}, kExampleP)), ModelError);
}

} // TEST_SUITE
