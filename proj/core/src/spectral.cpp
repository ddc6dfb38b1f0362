#include "fts/spectral.hpp"

#include "fts/errors.hpp"
#include "fts/graph_criteria.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fts {

namespace {

constexpr unsigned kKronrodDepth = 20;

template <class F>
double integrate_unit(F f, const char* what, int component, double* error_out = nullptr) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, 0.0, 1.0, kKronrodDepth, kQuadratureTolerance, &error, &l1);
  if (!std::isfinite(value) || error > kQuadratureTolerance * std::max(l1, 1e-300) * 10.0 + 1e-300)
    throw QuadratureError(std::string("quadrature of ") + what + " did not converge for component " +
                          std::to_string(component + 1) + " (error estimate " +
                          std::to_string(error) + ")");
  if (error_out) *error_out = error;
  return value;
}

} // namespace

double TravelTimes::min() const { return *std::min_element(tau.begin(), tau.end()); }
double TravelTimes::max() const { return *std::max_element(tau.begin(), tau.end()); }

TravelTimes compute_travel_times(const HyperbolicSystem& sys) {
  if (!sys.speeds_time_independent())
    throw ModelError("travel times need speeds a_j that do not depend on t");
  TravelTimes tt;
  for (int j = 0; j < sys.n(); ++j) {
    const Expr& a = sys.speed(j);
    double err = 0.0;
    double alpha;
    if (auto c = a.constant_value()) {
      alpha = -1.0 / *c;
    } else {
      alpha = -integrate_unit([&a](double x) { return 1.0 / a.eval(x, 0.0); }, "1/a_j", j, &err);
    }
    tt.alpha1.push_back(alpha);
    tt.tau.push_back(std::fabs(alpha));
    tt.error_estimate.push_back(err);
  }
  return tt;
}

TransformedBoundary transform_boundary(const HyperbolicSystem& sys) {
  if (!is_autonomous(sys)) throw ModelError("boundary transform needs an autonomous system");
  const Matrix p = sys.boundary().constant_matrix();
  const auto n = static_cast<std::size_t>(sys.n());
  TransformedBoundary tb;
  tb.beta.resize(n);
  for (int j = 0; j < sys.n(); ++j) {
    const Expr& a = sys.speed(j);
    const Expr& b = sys.damping(j);
    double beta;
    if (b.constant_value() == 0.0) {
      beta = 0.0;
    } else if (a.constant_value() && b.constant_value()) {
      beta = *b.constant_value() / *a.constant_value();
    } else {
      beta = integrate_unit([&](double x) { return b.eval(x, 0.0) / a.eval(x, 0.0); }, "b_j/a_j", j);
    }
    tb.beta[static_cast<std::size_t>(j)] = beta;
  }
  tb.p1 = Matrix(n);
  const auto m = static_cast<std::size_t>(sys.m());
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j < m ? 1.0 : std::exp(tb.beta[j]);
    for (std::size_t k = 0; k < n; ++k) {
      const double right = k < m ? std::exp(-tb.beta[k]) : 1.0;
      tb.p1(j, k) = left * p(j, k) * right;
    }
  }
  return tb;
}

DirichletPolynomial::DirichletPolynomial(std::vector<DirichletTerm> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end(),
            [](const DirichletTerm& a, const DirichletTerm& b) { return a.r < b.r; });
}

complex DirichletPolynomial::operator()(complex lambda) const {
  complex s = 1.0;
  for (const auto& t : terms_) s += t.coeff * std::exp(-lambda * t.r);
  return s;
}

complex DirichletPolynomial::derivative(complex lambda) const {
  complex s = 0.0;
  for (const auto& t : terms_) s += -t.r * t.coeff * std::exp(-lambda * t.r);
  return s;
}

double DirichletPolynomial::scale(complex lambda) const {
  double s = 1.0;
  for (const auto& t : terms_) s += std::fabs(t.coeff) * std::exp(-lambda.real() * t.r);
  return s;
}

double DirichletPolynomial::min_exponent() const {
  return terms_.empty() ? 0.0 : terms_.front().r;
}

double DirichletPolynomial::max_exponent() const {
  return terms_.empty() ? 0.0 : terms_.back().r;
}

double DirichletPolynomial::coefficient_l1() const {
  return std::accumulate(terms_.begin(), terms_.end(), 0.0,
                         [](double s, const DirichletTerm& t) { return s + std::fabs(t.coeff); });
}

DirichletPolynomial expand_characteristic(const Matrix& p1, const std::vector<double>& tau) {
  const std::size_t n = p1.size();
  if (tau.size() != n) throw DimensionError("travel time count does not match matrix size");
  if (n > kMaxMinorDimension)
    throw DimensionError("characteristic expansion is limited to n <= 22");

  std::vector<DirichletTerm> raw;
  raw.reserve((std::size_t{1} << n) - 1);
  double max_minor = 0.0;
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    std::vector<int> idx;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1U << i)) {
        idx.push_back(static_cast<int>(i));
        r += tau[i];
      }
    const double minor = determinant(p1.principal(idx));
    max_minor = std::max(max_minor, std::fabs(minor));
    const double sign = (idx.size() % 2 == 0) ? 1.0 : -1.0;
    raw.push_back({r, sign * minor});
  }
  std::sort(raw.begin(), raw.end(),
            [](const DirichletTerm& a, const DirichletTerm& b) { return a.r < b.r; });

  const double tau_max = n == 0 ? 0.0 : *std::max_element(tau.begin(), tau.end());
  const double merge_tol = kExponentMergeTolerance * tau_max;
  const double drop_tol = kCoefficientDropTolerance * (1.0 + max_minor);

  std::vector<DirichletTerm> merged;
  for (std::size_t i = 0; i < raw.size();) {
    const double r0 = raw[i].r;
    double sum = 0.0;
    std::size_t k = i;
    while (k < raw.size() && raw[k].r - r0 <= merge_tol) sum += raw[k++].coeff;
    if (std::fabs(sum) > drop_tol) merged.push_back({r0, sum});
    i = k;
  }
  return DirichletPolynomial(std::move(merged));
}

bool is_spectrum_empty(const DirichletPolynomial& d) { return d.is_constant(); }

Window default_window(const DirichletPolynomial& d) {
  if (d.is_constant()) throw RootFindingError("constant Dirichlet polynomial has no zeros");
  const double rmin = d.min_exponent();
  const double l = std::log(1.0 + d.coefficient_l1());
  return {-(10.0 / rmin) * l, l / rmin, 0.0, 50.0 / rmin};
}

namespace {

constexpr double kMaxPhaseStep = std::numbers::pi / 4.0;
constexpr double kZeroOnContour = 1e-13;
constexpr int kMaxSegmentDepth = 48;

struct EdgeWalker {
  const DirichletPolynomial& d;
  bool failed = false;

  complex eval(complex z) {
    complex f = d(z);
    if (std::abs(f) <= kZeroOnContour * d.scale(z)) failed = true;
    return f;
  }

  // Phase increment of Delta along [z0, z1], refined until every step
  // turns by less than pi/4 and agrees with its two halves.
  double segment(complex z0, complex f0, complex z1, complex f1, int depth) {
    if (failed) return 0.0;
    const double whole = std::arg(f1 / f0);
    const complex zm = 0.5 * (z0 + z1);
    const complex fm = eval(zm);
    if (failed) return 0.0;
    const double a = std::arg(fm / f0);
    const double b = std::arg(f1 / fm);
    if (std::fabs(whole) < kMaxPhaseStep && std::fabs(a + b - whole) < 1e-9) return whole;
    if (depth >= kMaxSegmentDepth) {
      failed = true;
      return 0.0;
    }
    return segment(z0, f0, zm, fm, depth + 1) + segment(zm, fm, z1, f1, depth + 1);
  }

  double edge(complex z0, complex z1) {
    const double len = std::abs(z1 - z0);
    const int base = std::max(8, static_cast<int>(std::ceil(2.0 * len * d.max_exponent())) + 1);
    double total = 0.0;
    complex zp = z0;
    complex fp = eval(z0);
    for (int i = 1; i <= base && !failed; ++i) {
      const complex z = i == base ? z1 : z0 + (z1 - z0) * (static_cast<double>(i) / base);
      const complex f = eval(z);
      if (failed) break;
      total += segment(zp, fp, z, f, 0);
      zp = z;
      fp = f;
    }
    return total;
  }
};

std::optional<complex> newton(const DirichletPolynomial& d, complex z, double tol) {
  for (int it = 0; it < 60; ++it) {
    const complex f = d(z);
    const complex df = d.derivative(z);
    if (df == complex(0.0)) return std::nullopt;
    const complex step = f / df;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return std::nullopt;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
  }
  if (std::abs(d(z)) > tol) return std::nullopt;
  return z;
}

struct Search {
  const DirichletPolynomial& d;
  const RootSearchOptions& opts;
  RootSearch out;

  static constexpr std::array<double, 4> kSplitRatios{0.5 + 0.0082842712, 0.5 - 0.0173205080,
                                                      0.5 + 0.0223606797, 0.5 - 0.0316227766};

  void isolate(const Window& box, int winding, int depth) {
    if (winding == 0) return;
    if (winding == 1 && try_newton(box)) return;
    if (depth >= opts.max_depth) {
      ++out.failed_boxes;
      return;
    }
    for (int attempt = 0; attempt <= opts.max_edge_perturbations; ++attempt) {
      const double s = kSplitRatios[static_cast<std::size_t>(attempt) % kSplitRatios.size()];
      const double rm = box.re0 + s * (box.re1 - box.re0);
      const double im = box.im0 + (1.0 - s) * (box.im1 - box.im0);
      const std::array<Window, 4> kids{Window{box.re0, rm, box.im0, im}, Window{rm, box.re1, box.im0, im},
                                       Window{box.re0, rm, im, box.im1}, Window{rm, box.re1, im, box.im1}};
      std::array<int, 4> w{};
      bool ok = true;
      int sum = 0;
      for (std::size_t i = 0; i < 4 && ok; ++i) {
        auto wi = winding_number(d, kids[i]);
        if (!wi || *wi < 0) {
          ok = false;
          break;
        }
        w[i] = *wi;
        sum += *wi;
      }
      if (!ok || sum != winding) continue;
      for (std::size_t i = 0; i < 4; ++i) isolate(kids[i], w[i], depth + 1);
      return;
    }
    ++out.failed_boxes;
  }

  bool try_newton(const Window& box) {
    const std::array<std::pair<double, double>, 5> starts{
        std::pair{0.5, 0.5}, {0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
    for (auto [fx, fy] : starts) {
      const complex z0(box.re0 + fx * (box.re1 - box.re0), box.im0 + fy * (box.im1 - box.im0));
      auto z = newton(d, z0, opts.residual_tolerance);
      if (!z || !box.contains(*z)) continue;
      out.roots.push_back({*z, std::abs(d(*z)), 1});
      return true;
    }
    return false;
  }
};

} // namespace

std::optional<int> winding_number(const DirichletPolynomial& d, const Window& box) {
  EdgeWalker walker{d};
  const complex c00(box.re0, box.im0), c10(box.re1, box.im0), c11(box.re1, box.im1),
      c01(box.re0, box.im1);
  double total = walker.edge(c00, c10);
  total += walker.edge(c10, c11);
  total += walker.edge(c11, c01);
  total += walker.edge(c01, c00);
  if (walker.failed) return std::nullopt;
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::fabs(turns - rounded) > 1e-3) return std::nullopt;
  return static_cast<int>(rounded);
}

RootSearch find_roots(const DirichletPolynomial& d, const Window& window,
                      const RootSearchOptions& opts) {
  if (d.is_constant()) throw RootFindingError("constant Dirichlet polynomial has no zeros");
  if (!(window.re1 > window.re0) || !(window.im1 > window.im0))
    throw RootFindingError("search window must have positive width and height");

  // Expand the window outward when its boundary passes through a zero.
  Window box = window;
  std::optional<int> total = winding_number(d, box);
  const double pad = std::max(window.re1 - window.re0, window.im1 - window.im0) * 1e-4;
  for (int attempt = 1; !total && attempt <= opts.max_edge_perturbations; ++attempt) {
    const double grow = pad * attempt * std::numbers::sqrt2;
    box = {window.re0 - grow, window.re1 + grow * 0.73, window.im0 - grow * 0.61, window.im1 + grow};
    total = winding_number(d, box);
  }
  if (!total || *total < 0)
    throw RootFindingError("could not compute a winding number for the search window");

  Search s{d, opts, {}};
  s.out.total_winding = *total;
  s.isolate(box, *total, 0);

  auto& roots = s.out.roots;
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) {
    if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
    return a.value.real() < b.value.real();
  });
  return s.out;
}

SpectrumReport spectrum_report(const HyperbolicSystem& sys, std::optional<Window> window) {
  if (!is_autonomous(sys))
    throw ModelError("spectral criterion applies to autonomous systems only");
  validate_system(sys);
  SpectrumReport rep;
  rep.travel = compute_travel_times(sys);
  rep.transformed = transform_boundary(sys);
  rep.delta = expand_characteristic(rep.transformed.p1, rep.travel.tau);
  rep.empty = is_spectrum_empty(rep.delta);
  rep.fts = rep.empty;
  if (!rep.empty) {
    rep.window = window ? *window : default_window(rep.delta);
    rep.roots = find_roots(rep.delta, *rep.window);
  }
  return rep;
}

} // namespace fts
