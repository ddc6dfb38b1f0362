#include "fts/model.hpp"

#include "fts/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fts {

BoundaryMatrix::BoundaryMatrix(const Matrix& constant) : n_(constant.size()) {
  entries_.reserve(n_ * n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) entries_.emplace_back(constant(j, k));
  build_support();
}

BoundaryMatrix::BoundaryMatrix(std::size_t n, std::vector<BoundaryEntry> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_)
    throw ModelError("boundary matrix needs " + std::to_string(n_ * n_) + " entries, got " +
                     std::to_string(entries_.size()));
  build_support();
}

void BoundaryMatrix::build_support() {
  support_.assign(n_, {});
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k)
      if (structurally_nonzero(j, k)) support_[j].push_back(static_cast<int>(k));
}

bool BoundaryMatrix::structurally_nonzero(std::size_t j, std::size_t k) const {
  const auto& e = entry(j, k);
  if (const auto* v = std::get_if<double>(&e)) return *v != 0.0;
  return std::get<MaskedEntry>(e).mask;
}

double BoundaryMatrix::value(std::size_t j, std::size_t k, double t) const {
  const auto& e = entry(j, k);
  if (const auto* v = std::get_if<double>(&e)) return *v;
  const auto& me = std::get<MaskedEntry>(e);
  return me.mask ? me.q.eval(0.0, t) : 0.0;
}

bool BoundaryMatrix::is_constant() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const BoundaryEntry& e) { return std::holds_alternative<double>(e); });
}

bool BoundaryMatrix::uses_t() const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [](const BoundaryEntry& e) {
    const auto* me = std::get_if<MaskedEntry>(&e);
    return me != nullptr && me->mask && me->q.uses_t();
  });
}

Matrix BoundaryMatrix::constant_matrix() const {
  Matrix p(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = 0; k < n_; ++k) {
      const auto& e = entry(j, k);
      if (const auto* v = std::get_if<double>(&e)) {
        p(j, k) = *v;
        continue;
      }
      const auto& me = std::get<MaskedEntry>(e);
      if (!me.mask) continue;
      auto c = me.q.constant_value();
      if (!me.q.is_constant() || !c) throw ModelError("boundary matrix is time dependent");
      p(j, k) = *c;
    }
  }
  return p;
}

HyperbolicSystem::HyperbolicSystem(int n, int m, std::vector<Expr> a, std::vector<Expr> b,
                                   BoundaryMatrix boundary, double horizon, int sample_density)
    : n_(n), m_(m), a_(std::move(a)), b_(std::move(b)), boundary_(std::move(boundary)),
      horizon_(horizon), sample_density_(sample_density) {
  if (n_ < 2) throw ModelError("n must be at least 2");
  if (m_ < 0 || m_ > n_) throw ModelError("m must lie in [0, n]");
  const auto un = static_cast<std::size_t>(n_);
  if (a_.size() != un) throw ModelError("expected " + std::to_string(n_) + " speeds a_j");
  if (b_.size() != un) throw ModelError("expected " + std::to_string(n_) + " dampings b_j");
  if (boundary_.size() != un) throw ModelError("boundary matrix must be n x n");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) throw ModelError("horizon must be positive");
  if (sample_density_ < 2) throw ModelError("sample density must be at least 2");
}

bool HyperbolicSystem::speeds_time_independent() const noexcept {
  return std::none_of(a_.begin(), a_.end(), [](const Expr& e) { return e.uses_t(); });
}

InitialData InitialData::zero(int n) {
  return InitialData(std::vector<Expr>(static_cast<std::size_t>(n), Expr::constant(0.0)));
}

std::vector<double> chebyshev_grid(double lo, double hi, int count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  if (count == 1) {
    g[0] = lo;
    return g;
  }
  for (int i = 0; i < count; ++i) {
    double s = 0.5 * (1.0 - std::cos(std::numbers::pi * i / (count - 1)));
    g[static_cast<std::size_t>(i)] = lo + (hi - lo) * s;
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

ValidationReport inspect_system(const HyperbolicSystem& sys) {
  ValidationReport rep;
  rep.a_floor = std::numeric_limits<double>::infinity();
  const auto xs = chebyshev_grid(0.0, 1.0, sys.sample_density());
  const auto ts = chebyshev_grid(0.0, sys.horizon(), sys.sample_density());

  bool all_ok = true;
  try {
    for (int j = 0; j < sys.n(); ++j) {
      ComponentCheck cc;
      cc.a_min = std::numeric_limits<double>::infinity();
      cc.a_max = -std::numeric_limits<double>::infinity();
      const auto& a = sys.speed(j);
      const auto& b = sys.damping(j);
      // Only sample along t when the expression depends on it.
      const std::size_t nt = a.uses_t() || b.uses_t() ? ts.size() : 1;
      for (std::size_t it = 0; it < nt; ++it) {
        for (double x : xs) {
          double av = a.eval(x, ts[it]);
          double bv = b.eval(x, ts[it]);
          cc.a_min = std::min(cc.a_min, av);
          cc.a_max = std::max(cc.a_max, av);
          cc.abs_b_max = std::max(cc.abs_b_max, std::fabs(bv));
        }
      }
      cc.abs_a_min = sys.positive_speed(j) ? cc.a_min : -cc.a_max;
      cc.sign_ok = cc.abs_a_min > 0.0 && std::isfinite(cc.a_min) && std::isfinite(cc.a_max);
      if (!cc.sign_ok) {
        all_ok = false;
        if (rep.message.empty())
          rep.message = "sign condition violated for component " + std::to_string(j + 1) +
                        ": a_" + std::to_string(j + 1) + " must be " +
                        (sys.positive_speed(j) ? "positive" : "negative") +
                        " on [0,1]x[0,horizon], sampled range [" + std::to_string(cc.a_min) +
                        ", " + std::to_string(cc.a_max) + "]";
      }
      rep.a_floor = std::min(rep.a_floor, std::max(cc.abs_a_min, 0.0));
      rep.a_sup = std::max({rep.a_sup, std::fabs(cc.a_min), std::fabs(cc.a_max)});
      rep.b_sup = std::max(rep.b_sup, cc.abs_b_max);
      rep.components.push_back(cc);
    }
  } catch (const EvalError& e) {
    rep.valid = false;
    rep.message = std::string("coefficient evaluation failed on the validation grid: ") + e.what();
    return rep;
  }

  if (all_ok && rep.a_floor < kMinSpeedFloor) {
    all_ok = false;
    rep.message = "speed floor " + std::to_string(rep.a_floor) + " is below 1e-9";
  }
  rep.valid = all_ok;
  return rep;
}

ValidationReport validate_system(const HyperbolicSystem& sys) {
  auto rep = inspect_system(sys);
  if (!rep.valid) throw ModelError(rep.message);
  return rep;
}

bool is_autonomous(const HyperbolicSystem& sys) {
  for (int j = 0; j < sys.n(); ++j)
    if (sys.speed(j).uses_t() || sys.damping(j).uses_t()) return false;
  return !sys.boundary().uses_t();
}

} // namespace fts
