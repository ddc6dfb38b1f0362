#pragma once

// The decoupled hyperbolic problem on the unit interval
//
//   d_t u_j + a_j(x,t) d_x u_j + b_j(x,t) u_j = 0,       j = 1..n,
//
// with reflection boundary conditions u_out(t) = P(t) u_in(t), where
//   u_out = (u_1(0),..,u_m(0), u_{m+1}(1),..,u_n(1))   (inflow points),
//   u_in  = (u_1(1),..,u_m(1), u_{m+1}(0),..,u_n(0))   (outflow points),
// and initial data u_j(x,0) = phi_j(x).
//
// Components are 0-based in this API; the first m have positive speed.

#include "fts/expr.hpp"
#include "fts/matrix.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace fts {

// Time-dependent entry p_jk(t) = q_jk(t) * w_jk with a declared 0/1 mask.
struct MaskedEntry {
  bool mask = false;
  Expr q;
};

using BoundaryEntry = std::variant<double, MaskedEntry>;

class BoundaryMatrix {
public:
  BoundaryMatrix() = default;
  explicit BoundaryMatrix(const Matrix& constant);
  BoundaryMatrix(std::size_t n, std::vector<BoundaryEntry> entries);

  std::size_t size() const noexcept { return n_; }
  const BoundaryEntry& entry(std::size_t j, std::size_t k) const { return entries_[j * n_ + k]; }

  // Exact structural test: constant 0.0 or mask 0 means "zero".
  bool structurally_nonzero(std::size_t j, std::size_t k) const;

  double value(std::size_t j, std::size_t k, double t) const;

  bool is_constant() const noexcept;  // every entry is a plain number
  bool uses_t() const noexcept;

  // Plain numeric matrix; throws ModelError when some entry is masked.
  Matrix constant_matrix() const;

  // Indices k with p_jk structurally nonzero.
  const std::vector<int>& support(std::size_t j) const { return support_[j]; }

private:
  void build_support();

  std::size_t n_ = 0;
  std::vector<BoundaryEntry> entries_;
  std::vector<std::vector<int>> support_;
};

class HyperbolicSystem {
public:
  static constexpr int kDefaultSampleDensity = 257;

  // Throws ModelError when shapes are inconsistent (n < 2, m outside [0,n],
  // list lengths or matrix size different from n, horizon <= 0).
  HyperbolicSystem(int n, int m, std::vector<Expr> a, std::vector<Expr> b,
                   BoundaryMatrix boundary, double horizon,
                   int sample_density = kDefaultSampleDensity);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  const Expr& speed(int j) const { return a_[static_cast<std::size_t>(j)]; }
  const Expr& damping(int j) const { return b_[static_cast<std::size_t>(j)]; }
  const BoundaryMatrix& boundary() const noexcept { return boundary_; }
  double horizon() const noexcept { return horizon_; }
  int sample_density() const noexcept { return sample_density_; }

  bool positive_speed(int j) const noexcept { return j < m_; }
  // Where characteristics of component j enter the domain (0 or 1) and leave it.
  double inflow_point(int j) const noexcept { return positive_speed(j) ? 0.0 : 1.0; }
  double outflow_point(int j) const noexcept { return positive_speed(j) ? 1.0 : 0.0; }

  // Speeds independent of t (b and P may still depend on t).
  bool speeds_time_independent() const noexcept;

private:
  int n_;
  int m_;
  std::vector<Expr> a_;
  std::vector<Expr> b_;
  BoundaryMatrix boundary_;
  double horizon_;
  int sample_density_;
};

class InitialData {
public:
  InitialData() = default;
  explicit InitialData(std::vector<Expr> phi) : phi_(std::move(phi)) {}

  std::size_t size() const noexcept { return phi_.size(); }
  double operator()(int j, double x) const { return phi_[static_cast<std::size_t>(j)].eval(x, 0.0); }
  const Expr& component(int j) const { return phi_[static_cast<std::size_t>(j)]; }

  static InitialData zero(int n);

private:
  std::vector<Expr> phi_;
};

struct ComponentCheck {
  bool sign_ok = false;
  double a_min = 0.0;      // signed extrema of a_j on the grid
  double a_max = 0.0;
  double abs_a_min = 0.0;
  double abs_b_max = 0.0;
};

struct ValidationReport {
  double a_floor = 0.0;  // min |a_j| over the grid and all j
  double a_sup = 0.0;    // max |a_j|
  double b_sup = 0.0;    // max |b_j|
  std::vector<ComponentCheck> components;
  bool valid = false;
  std::string message;
};

inline constexpr double kMinSpeedFloor = 1e-9;

// Grid nodes (1 - cos(pi i / (N-1))) / 2 scaled to [lo, hi]; endpoints included.
std::vector<double> chebyshev_grid(double lo, double hi, int count);

// Samples the sign condition and bounds without throwing.
ValidationReport inspect_system(const HyperbolicSystem& sys);

// Same report; throws ModelError on a sign violation or a_floor < 1e-9.
ValidationReport validate_system(const HyperbolicSystem& sys);

// True iff no a_j, b_j or q_jk references t.
bool is_autonomous(const HyperbolicSystem& sys);

} // namespace fts
