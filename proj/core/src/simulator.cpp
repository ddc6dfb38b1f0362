#include "fts/simulator.hpp"

#include "fts/errors.hpp"
#include "fts/spectral.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

namespace fts {

namespace {

constexpr int kMarchDivisor = 64;
constexpr double kEventTolerance = 1e-12;

struct SpatialRule {
  std::vector<double> x;
  std::vector<double> w;
};

// Composite Simpson on nodes offset from both ends by spacing/sqrt(2), plus
// midpoint rule on the two end strips. No node falls on a rational abscissa.
SpatialRule offset_simpson(int points) {
  int n = std::max(points, 3);
  if (n % 2 == 0) ++n;
  const double h = 1.0 / (n - 1 + std::numbers::sqrt2);
  const double off = h / std::numbers::sqrt2;
  SpatialRule rule;
  rule.x.reserve(static_cast<std::size_t>(n) + 2);
  rule.w.reserve(static_cast<std::size_t>(n) + 2);
  rule.x.push_back(0.5 * off);
  rule.w.push_back(off);
  for (int i = 0; i < n; ++i) {
    rule.x.push_back(off + i * h);
    double c = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    rule.w.push_back(c * h / 3.0);
  }
  rule.x.push_back(1.0 - 0.5 * off);
  rule.w.push_back(off);
  return rule;
}

std::string number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return {buf.data(), ptr};
}

} // namespace

double BoundaryTrace::interpolate(const std::vector<double>& v, double dt, double t,
                                  std::size_t available) {
  if (available == 0) throw SimulationError("boundary trace is empty");
  const double pos = t / dt;
  if (pos <= 0.0) return v[0];
  const double fl = std::floor(pos);
  const auto i0 = static_cast<std::size_t>(fl);
  const double frac = pos - fl;
  if (frac == 0.0 && i0 < available) return v[i0];
  if (available == 1) return v[0];

  if (i0 == 0 || available < 4) {
    // Linear, extrapolating from the last two samples if needed.
    std::size_t a = std::min(i0, available - 2);
    double p = pos - static_cast<double>(a);
    return v[a] + (v[a + 1] - v[a]) * p;
  }
  std::size_t s = i0 - 1;
  if (s + 4 > available) s = available - 4;
  const double p = pos - static_cast<double>(s);
  double sum = 0.0;
  for (int m = 0; m < 4; ++m) {
    double l = 1.0;
    for (int q = 0; q < 4; ++q)
      if (q != m) l *= (p - q) / static_cast<double>(m - q);
    sum += l * v[s + static_cast<std::size_t>(m)];
  }
  return sum;
}

Simulator::Simulator(HyperbolicSystem sys, SimulationOptions opts)
    : sys_(std::move(sys)), opts_(opts), validation_(validate_system(sys_)) {
  if (opts_.rk_divisor < 1) throw SimulationError("rk_divisor must be positive");
  if (opts_.spatial_points < 3) throw SimulationError("need at least 3 spatial points");

  info_.resize(static_cast<std::size_t>(sys_.n()));
  for (int j = 0; j < sys_.n(); ++j) {
    auto& ci = info_[static_cast<std::size_t>(j)];
    ci.speed = sys_.speed(j).constant_value();
    ci.damping = sys_.damping(j).constant_value();
  }

  if (sys_.speeds_time_independent()) {
    min_crossing_ = compute_travel_times(sys_).min();
  } else {
    min_crossing_ = 1.0 / validation_.a_sup;
  }
  dt_ = opts_.dt.value_or(min_crossing_ / kMarchDivisor);
  if (!(dt_ > 0.0)) throw SimulationError("time step must be positive");
  rk_step_ = std::min(1.0, dt_ * validation_.a_floor) / opts_.rk_divisor;
}

CharFoot Simulator::trace(int j, double x, double t) const {
  if (x < 0.0 || x > 1.0 || t < 0.0) throw SimulationError("trace point outside the strip");
  if (t == 0.0) return {FootKind::initial_line, x, 0.0, 1.0};
  if (auto a = info_[static_cast<std::size_t>(j)].speed) return trace_constant(j, x, t, *a);
  return trace_rk4(j, x, t);
}

CharFoot Simulator::trace_constant(int j, double x, double t, double a) const {
  CharFoot foot;
  if (sys_.positive_speed(j)) {
    const double xf = x - a * t;
    if (xf > 0.0) {
      foot = {FootKind::initial_line, xf, 0.0, 1.0};
    } else {
      foot = {FootKind::left_boundary, 0.0, t - x / a, 1.0};
    }
  } else {
    const double xf = x - a * t;
    if (xf < 1.0) {
      foot = {FootKind::initial_line, xf, 0.0, 1.0};
    } else {
      foot = {FootKind::right_boundary, 1.0, t - (1.0 - x) / (-a), 1.0};
    }
  }
  if (auto b = info_[static_cast<std::size_t>(j)].damping) {
    if (*b != 0.0) foot.damping = std::exp(*b / a * (foot.x - x));
  } else {
    foot.damping = std::exp(damping_along_line(j, x, foot.x, t, a));
  }
  return foot;
}

double Simulator::damping_along_line(int j, double x, double x_foot, double t, double a) const {
  if (x_foot == x) return 0.0;
  const Expr& b = sys_.damping(j);
  auto f = [&](double eta) { return b.eval(eta, t + (eta - x) / a) / a; };
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, x, x_foot, 15, 1e-12,
                                                                         &error);
}

CharFoot Simulator::trace_rk4(int j, double x, double t) const {
  const Expr& a = sys_.speed(j);
  const Expr& b = sys_.damping(j);
  const auto b_const = info_[static_cast<std::size_t>(j)].damping;
  const bool undamped = b_const && *b_const == 0.0;

  // State: crossing time w and damping exponent I, as functions of xi.
  struct State {
    double w;
    double i;
  };
  auto rhs = [&](double xi, const State& s) -> State {
    const double av = a.eval(xi, s.w);
    const double bv = undamped ? 0.0 : (b_const ? *b_const : b.eval(xi, s.w));
    return {1.0 / av, bv / av};
  };
  auto step = [&](double xi, const State& s, double h) -> State {
    const State k1 = rhs(xi, s);
    const State k2 = rhs(xi + 0.5 * h, {s.w + 0.5 * h * k1.w, s.i + 0.5 * h * k1.i});
    const State k3 = rhs(xi + 0.5 * h, {s.w + 0.5 * h * k2.w, s.i + 0.5 * h * k2.i});
    const State k4 = rhs(xi + h, {s.w + h * k3.w, s.i + h * k3.i});
    return {s.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
            s.i + h / 6.0 * (k1.i + 2.0 * k2.i + 2.0 * k3.i + k4.i)};
  };

  const bool positive = sys_.positive_speed(j);
  const double dir = positive ? -1.0 : 1.0;
  const double edge = positive ? 0.0 : 1.0;
  const FootKind boundary_kind = positive ? FootKind::left_boundary : FootKind::right_boundary;

  double xi = x;
  State s{t, 0.0};
  for (long long n = 0;; ++n) {
    if (n > opts_.max_rk_steps)
      throw SimulationError("characteristic tracing exceeded the step cap for component " +
                            std::to_string(j + 1));
    const double remaining = std::fabs(edge - xi);
    if (remaining == 0.0) return {boundary_kind, edge, s.w, std::exp(s.i)};
    const double len = std::min(rk_step_, remaining);
    const State next = step(xi, s, dir * len);
    if (next.w < 0.0) {
      // The characteristic reaches t = 0 inside this step; bisect the step length.
      double lo = 0.0;
      double hi = len;
      State at_lo = s;
      while (hi - lo > kEventTolerance) {
        const double mid = 0.5 * (lo + hi);
        const State sm = step(xi, s, dir * mid);
        if (sm.w < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          at_lo = sm;
        }
      }
      const double xf = std::clamp(xi + dir * lo, 0.0, 1.0);
      return {FootKind::initial_line, xf, 0.0, std::exp(at_lo.i)};
    }
    s = next;
    xi = len == remaining ? edge : xi + dir * len;
    if (next.w == 0.0 && xi != edge) return {FootKind::initial_line, xi, 0.0, std::exp(s.i)};
  }
}

double Simulator::evaluate_recursive(const InitialData& phi, int j, double x, double t, int depth,
                                     int cap) const {
  const CharFoot foot = trace(j, x, t);
  if (foot.kind == FootKind::initial_line) return foot.damping * phi(j, foot.x);
  if (depth >= cap) throw SimulationError("reflection depth cap exceeded");
  double sum = 0.0;
  const auto& bnd = sys_.boundary();
  for (int k : bnd.support(static_cast<std::size_t>(j))) {
    const double p = bnd.value(static_cast<std::size_t>(j), static_cast<std::size_t>(k), foot.t);
    if (p == 0.0) continue;
    sum += p * evaluate_recursive(phi, k, sys_.outflow_point(k), foot.t, depth + 1, cap);
  }
  return foot.damping * sum;
}

double Simulator::evaluate_component(const InitialData& phi, int j, double x, double t) const {
  if (phi.size() != static_cast<std::size_t>(sys_.n()))
    throw SimulationError("initial data has the wrong number of components");
  if (t > sys_.horizon() * (1.0 + 1e-12)) throw SimulationError("time beyond the horizon");
  const int cap = static_cast<int>(std::ceil(t * validation_.a_sup)) + 2;
  return evaluate_recursive(phi, j, x, t, 0, cap);
}

std::vector<double> Simulator::evaluate(const InitialData& phi, double x, double t) const {
  std::vector<double> u(static_cast<std::size_t>(sys_.n()));
  for (int j = 0; j < sys_.n(); ++j) u[static_cast<std::size_t>(j)] = evaluate_component(phi, j, x, t);
  return u;
}

BoundaryTrace Simulator::march(const InitialData& phi, double until) const {
  if (phi.size() != static_cast<std::size_t>(sys_.n()))
    throw SimulationError("initial data has the wrong number of components");
  if (dt_ > min_crossing_)
    throw SimulationError("time step exceeds the shortest crossing time; marching needs dt <= " +
                          std::to_string(min_crossing_));
  if (until > sys_.horizon() * (1.0 + 1e-12)) throw SimulationError("march beyond the horizon");

  const auto n = static_cast<std::size_t>(sys_.n());
  const auto steps = static_cast<std::size_t>(std::ceil(until / dt_ - 1e-9)) + 1;
  std::vector<std::vector<double>> g(n, std::vector<double>(steps, 0.0));
  const auto& bnd = sys_.boundary();

  std::vector<char> needed(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (int k : bnd.support(j)) needed[static_cast<std::size_t>(k)] = 1;

  std::vector<double> incident(n, 0.0);
  for (std::size_t i = 0; i < steps; ++i) {
    const double ti = static_cast<double>(i) * dt_;
    for (std::size_t k = 0; k < n; ++k) {
      if (!needed[k]) continue;
      const int kk = static_cast<int>(k);
      const double y = sys_.outflow_point(kk);
      if (i == 0) {
        incident[k] = phi(kk, y);
        continue;
      }
      const CharFoot foot = trace(kk, y, ti);
      const double base = foot.kind == FootKind::initial_line
                              ? phi(kk, foot.x)
                              : BoundaryTrace::interpolate(g[k], dt_, foot.t, i);
      incident[k] = foot.damping * base;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int k : bnd.support(j))
        sum += bnd.value(j, static_cast<std::size_t>(k), ti) * incident[static_cast<std::size_t>(k)];
      g[j][i] = sum;
    }
  }
  return BoundaryTrace(dt_, std::move(g));
}

std::vector<double> Simulator::reconstruct(const InitialData& phi, const BoundaryTrace& trace_data,
                                           double x, double t) const {
  if (t > trace_data.end_time() * (1.0 + 1e-12) + 1e-15)
    throw SimulationError("reconstruction time beyond the marched trace");
  std::vector<double> u(static_cast<std::size_t>(sys_.n()));
  for (int j = 0; j < sys_.n(); ++j) {
    const CharFoot foot = trace(j, x, t);
    const double base =
        foot.kind == FootKind::initial_line ? phi(j, foot.x) : trace_data.at(j, foot.t);
    u[static_cast<std::size_t>(j)] = foot.damping * base;
  }
  return u;
}

DecayPoint Simulator::norms_from(const std::function<std::vector<double>(double)>& u) const {
  static thread_local int cached_points = -1;
  static thread_local SpatialRule rule;
  if (cached_points != opts_.spatial_points) {
    rule = offset_simpson(opts_.spatial_points);
    cached_points = opts_.spatial_points;
  }
  DecayPoint p;
  double sq = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) {
    for (double v : u(rule.x[i])) {
      sq += rule.w[i] * v * v;
      p.sup = std::max(p.sup, std::fabs(v));
    }
  }
  p.l2 = std::sqrt(sq);
  return p;
}

DecayPoint Simulator::norms(const InitialData& phi, double t, SolveMode mode) const {
  DecayPoint p;
  if (mode == SolveMode::recursive) {
    p = norms_from([&](double x) { return evaluate(phi, x, t); });
  } else {
    const BoundaryTrace tr = march(phi, t);
    p = norms_from([&](double x) { return reconstruct(phi, tr, x, t); });
  }
  p.t = t;
  return p;
}

DecayCurve Simulator::decay_curve(const InitialData& phi, std::span<const double> times,
                                  SolveMode mode) const {
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw SimulationError("decay times must be strictly increasing");
  if (!times.empty() && times.front() < 0.0) throw SimulationError("decay times must be >= 0");

  DecayCurve curve;
  if (mode == SolveMode::recursive) {
    for (double t : times) curve.points.push_back(norms(phi, t, mode));
    return curve;
  }
  if (times.empty()) return curve;
  const BoundaryTrace tr = march(phi, times.back());
  for (double t : times) {
    DecayPoint p = norms_from([&](double x) { return reconstruct(phi, tr, x, t); });
    p.t = t;
    curve.points.push_back(p);
  }
  return curve;
}

std::vector<std::vector<double>> Simulator::snapshot(const InitialData& phi, double t, int points,
                                                     SolveMode mode) const {
  if (points < 2) throw SimulationError("snapshot needs at least 2 points");
  std::optional<BoundaryTrace> tr;
  if (mode == SolveMode::march) tr = march(phi, t);
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = static_cast<double>(i) / (points - 1);
    auto u = tr ? reconstruct(phi, *tr, x, t) : evaluate(phi, x, t);
    std::vector<double> row{x};
    row.insert(row.end(), u.begin(), u.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

VanishingResult Simulator::verify_vanishing(std::span<const InitialData> family, double candidate,
                                            double tol, bool claim_exact) const {
  if (family.empty()) throw SimulationError("probe family is empty");
  VanishingResult res;
  res.candidate = candidate;
  res.delta = 2.0 * dt_;
  const double after = candidate + res.delta;
  if (after > sys_.horizon()) throw SimulationError("candidate time + 2 dt exceeds the horizon");

  for (const auto& probe : family)
    res.max_sup_after = std::max(res.max_sup_after, norms(probe, after).sup);

  if (res.max_sup_after > tol) {
    res.verdict = res.max_sup_after <= 100.0 * tol ? Verdict::inconclusive : Verdict::fail;
    return res;
  }
  res.verdict = Verdict::pass;

  if (claim_exact) {
    const double before = candidate - res.delta;
    res.exactness = Exactness::unconfirmed;
    if (before >= 0.0) {
      for (std::size_t i = 0; i < family.size(); ++i) {
        if (norms(family[i], before).sup > tol) {
          res.survivor = i;
          res.exactness = Exactness::confirmed;
          break;
        }
      }
    }
  }

  double measured = 0.0;
  for (const auto& probe : family) {
    double lo = 0.0;
    double hi = after;
    if (norms(probe, 0.0).sup <= tol) continue;
    while (hi - lo > dt_ / 16.0) {
      const double mid = 0.5 * (lo + hi);
      if (norms(probe, mid).sup <= tol) hi = mid;
      else lo = mid;
    }
    measured = std::max(measured, hi);
  }
  res.measured_time = measured;
  return res;
}

double Simulator::reflection_iterate(int l, const StripFunction& u, int j, double x,
                                     double t) const {
  if (l == 0) return u(j, x, t);
  const CharFoot foot = trace(j, x, t);
  const double w = foot.kind == FootKind::initial_line ? 0.0 : foot.t;
  const auto& bnd = sys_.boundary();
  double sum = 0.0;
  for (int k : bnd.support(static_cast<std::size_t>(j))) {
    const double p = bnd.value(static_cast<std::size_t>(j), static_cast<std::size_t>(k), w);
    sum += p * reflection_iterate(l - 1, u, k, sys_.outflow_point(k), w);
  }
  return foot.damping * sum;
}

std::vector<InitialData> probe_family(int n, int per_component) {
  if (n < 1 || per_component < 1) throw SimulationError("probe family needs n >= 1 and a positive count");
  std::vector<InitialData> family;
  family.reserve(static_cast<std::size_t>(n * per_component));
  const std::string k = number(static_cast<double>(per_component));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < per_component; ++i) {
      const std::string c = number((i + 0.5) / per_component);
      const std::string r = "1 - " + k + "*abs(x - " + c + ")";
      const Expr bump = Expr::parse("((" + r + " + abs(" + r + "))/2)^3");
      std::vector<Expr> phi(static_cast<std::size_t>(n), Expr::constant(0.0));
      phi[static_cast<std::size_t>(j)] = bump;
      family.emplace_back(std::move(phi));
    }
  }
  return family;
}

} // namespace fts
