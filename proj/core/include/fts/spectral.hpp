#pragma once

// Spectral criterion for autonomous systems. After the gauge change
// w_j = u_j exp(int_0^x b_j/a_j) the boundary matrix becomes P1 and the
// eigenvalues of the generator are the zeros of
//
//   Delta(lambda) = det(I - diag(exp(-lambda tau_j)) P1)
//                 = 1 + sum_k E_k exp(-lambda r_k),
//
// a Dirichlet polynomial. The spectrum is empty (and the problem is FTS)
// iff every E_k vanishes.

#include "fts/matrix.hpp"
#include "fts/model.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace fts {

using complex = std::complex<double>;

inline constexpr double kQuadratureTolerance = 1e-12;

struct TravelTimes {
  std::vector<double> tau;     // tau_j = |alpha_j(1)|
  std::vector<double> alpha1;  // alpha_j(1) = -int_0^1 dxi / a_j(xi)
  std::vector<double> error_estimate;

  double min() const;
  double max() const;
};

// Adaptive Gauss-Kronrod quadrature of 1/|a_j| on [0,1]. Requires
// t-independent speeds; throws QuadratureError on non-convergence.
TravelTimes compute_travel_times(const HyperbolicSystem& sys);

struct TransformedBoundary {
  std::vector<double> beta;  // beta_j = int_0^1 b_j / a_j
  Matrix p1;
};

// Requires an autonomous system with a constant boundary matrix.
TransformedBoundary transform_boundary(const HyperbolicSystem& sys);

struct DirichletTerm {
  double r = 0.0;
  double coeff = 0.0;
};

class DirichletPolynomial {
public:
  DirichletPolynomial() = default;
  // Terms are sorted by exponent; equal exponents must already be merged.
  explicit DirichletPolynomial(std::vector<DirichletTerm> terms);

  const std::vector<DirichletTerm>& terms() const noexcept { return terms_; }
  bool is_constant() const noexcept { return terms_.empty(); }

  complex operator()(complex lambda) const;
  complex derivative(complex lambda) const;

  // 1 + sum |E_k| exp(-Re(lambda) r_k): magnitude scale of the terms.
  double scale(complex lambda) const;

  double min_exponent() const;
  double max_exponent() const;
  double coefficient_l1() const;

private:
  std::vector<DirichletTerm> terms_;
};

inline constexpr double kExponentMergeTolerance = 1e-10;
inline constexpr double kCoefficientDropTolerance = 1e-12;

// Subset expansion of det(I - diag(e^{-lambda tau}) P1): every nonempty
// J gives exponent sum_{j in J} tau_j and coefficient (-1)^|J| det P1[J,J].
DirichletPolynomial expand_characteristic(const Matrix& p1, const std::vector<double>& tau);

bool is_spectrum_empty(const DirichletPolynomial& d);

struct Window {
  double re0 = 0.0;
  double re1 = 0.0;
  double im0 = 0.0;
  double im1 = 0.0;

  bool contains(complex z) const {
    return z.real() >= re0 && z.real() <= re1 && z.imag() >= im0 && z.imag() <= im1;
  }
};

// Re in [-(10/r_min) ln(1+sum|E|), ln(1+sum|E|)/r_min], Im in [0, 50/r_min].
Window default_window(const DirichletPolynomial& d);

struct Root {
  complex value;
  double residual = 0.0;
  int winding = 0;  // winding number of the final isolating box
};

struct RootSearchOptions {
  double residual_tolerance = 1e-10;
  double edge_clearance = 1e-6;
  int max_depth = 40;
  int max_edge_perturbations = 3;
};

struct RootSearch {
  std::vector<Root> roots;  // sorted by imaginary part, then real part
  int total_winding = 0;    // zero count of the window from the argument principle
  int failed_boxes = 0;
};

// Argument-principle quadtree isolation followed by Newton refinement.
// Throws RootFindingError for a constant polynomial or a degenerate window.
RootSearch find_roots(const DirichletPolynomial& d, const Window& window,
                      const RootSearchOptions& opts = {});

// Net number of zeros enclosed by the window boundary, or nothing when a
// zero lies on (or numerically next to) the contour.
std::optional<int> winding_number(const DirichletPolynomial& d, const Window& box);

struct SpectrumReport {
  bool empty = false;
  DirichletPolynomial delta;
  TravelTimes travel;
  TransformedBoundary transformed;
  std::optional<Window> window;
  RootSearch roots;
  bool fts = false;
};

// Full pipeline; requires is_autonomous(sys). Roots are searched only when
// the spectrum is nonempty, in `window` or the default window.
SpectrumReport spectrum_report(const HyperbolicSystem& sys,
                               std::optional<Window> window = std::nullopt);

} // namespace fts
