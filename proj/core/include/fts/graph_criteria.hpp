#pragma once

// Robust finite-time stabilization criteria expressed through the zero
// pattern of the boundary matrix. The digraph G_P has an arrow j -> k iff
// p_jk is structurally nonzero; its adjacency matrix is the sign pattern W.
//
// The following are equivalent and are computed by independent routines:
//   * G_P is acyclic,
//   * W is nilpotent (W^n = 0 over the boolean semiring),
//   * every principal minor of W vanishes,
//   * every product w_{i1 i2} ... w_{in i(n+1)} vanishes (no walk of length n).

#include "fts/matrix.hpp"
#include "fts/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace fts {

class SignPattern {
public:
  SignPattern() = default;
  explicit SignPattern(std::size_t n) : n_(n), w_(n * n, 0) {}

  static SignPattern from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t j, std::size_t k) const { return w_[j * n_ + k] != 0; }
  void set(std::size_t j, std::size_t k, bool v) { w_[j * n_ + k] = v ? 1 : 0; }

  bool is_zero() const noexcept;
  std::size_t edge_count() const noexcept;

  // Boolean (OR-AND) product.
  SignPattern operator*(const SignPattern& rhs) const;

  Matrix to_matrix() const;

  bool operator==(const SignPattern&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> w_;
};

SignPattern sign_pattern(const BoundaryMatrix& p);
SignPattern sign_pattern(const Matrix& p);

struct CycleResult {
  bool acyclic = true;
  std::vector<int> cycle;  // 0-based vertices; cycle[i] -> cycle[i+1] -> ... -> cycle[0]
};

// Three-colour depth-first search.
CycleResult is_acyclic(const SignPattern& w);

// Smallest k <= n with W^k = 0, or nothing when W^n != 0.
std::optional<int> nilpotency_index(const SignPattern& w);

struct MinorsResult {
  bool all_zero = true;
  std::vector<int> witness;  // 0-based index set of a nonzero principal minor
  double witness_value = 0.0;
};

inline constexpr std::size_t kMaxMinorDimension = 22;
inline constexpr double kDefaultMinorTolerance = 1e-9;

// Real matrix: |det M[J,J]| <= tol * max(1, prod_{r in J} max_c |M[r,c]|).
// Throws DimensionError for n > 22.
MinorsResult principal_minors_all_zero(const Matrix& m, double tol = kDefaultMinorTolerance);

// Zero-one matrix: exact integer determinants.
MinorsResult principal_minors_all_zero(const SignPattern& w);

struct ProductResult {
  bool all_zero = true;
  std::vector<int> walk;  // n+1 vertices of a walk of length n when one exists
};

ProductResult product_condition(const SignPattern& w);

struct CriteriaReport {
  std::size_t n = 0;
  bool acyclic = false;
  std::optional<int> k0;
  bool minors_w_zero = false;
  std::optional<bool> minors_p_zero;  // empty for time-dependent boundaries
  bool product_zero = false;
  bool robust_fts = false;
  std::vector<int> cycle_witness;
  std::vector<int> walk_witness;
  std::vector<int> minor_witness;
  std::vector<int> minor_p_witness;
};

// Runs every criterion independently and throws InconsistencyError if the
// four sign-pattern verdicts disagree.
CriteriaReport robust_fts_report(const BoundaryMatrix& p, double tol = kDefaultMinorTolerance);

} // namespace fts
