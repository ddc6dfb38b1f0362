#include "fts/graph_criteria.hpp"

#include "fts/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace fts {

SignPattern SignPattern::from_rows(const std::vector<std::vector<int>>& rows) {
  SignPattern w(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != rows.size()) throw DimensionError("sign pattern must be square");
    for (std::size_t k = 0; k < rows.size(); ++k) w.set(j, k, rows[j][k] != 0);
  }
  return w;
}

bool SignPattern::is_zero() const noexcept {
  return std::all_of(w_.begin(), w_.end(), [](std::uint8_t v) { return v == 0; });
}

std::size_t SignPattern::edge_count() const noexcept {
  return static_cast<std::size_t>(std::count(w_.begin(), w_.end(), std::uint8_t{1}));
}

SignPattern SignPattern::operator*(const SignPattern& rhs) const {
  SignPattern out(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t l = 0; l < n_; ++l) {
      if (!(*this)(i, l)) continue;
      for (std::size_t k = 0; k < n_; ++k)
        if (rhs(l, k)) out.set(i, k, true);
    }
  return out;
}

Matrix SignPattern::to_matrix() const {
  Matrix m(n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t k = 0; k < n_; ++k) m(j, k) = (*this)(j, k) ? 1.0 : 0.0;
  return m;
}

SignPattern sign_pattern(const BoundaryMatrix& p) {
  SignPattern w(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    for (std::size_t k = 0; k < p.size(); ++k) w.set(j, k, p.structurally_nonzero(j, k));
  return w;
}

SignPattern sign_pattern(const Matrix& p) {
  SignPattern w(p.size());
  for (std::size_t j = 0; j < p.size(); ++j)
    for (std::size_t k = 0; k < p.size(); ++k) w.set(j, k, p(j, k) != 0.0);
  return w;
}

CycleResult is_acyclic(const SignPattern& w) {
  enum class Color : std::uint8_t { white, grey, black };
  const std::size_t n = w.size();
  std::vector<Color> color(n, Color::white);
  std::vector<int> parent(n, -1);

  // Iterative DFS: stack of (vertex, next successor to try).
  std::vector<std::pair<int, std::size_t>> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != Color::white) continue;
    stack.emplace_back(static_cast<int>(root), 0);
    color[root] = Color::grey;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto uv = static_cast<std::size_t>(v);
      if (next == n) {
        color[uv] = Color::black;
        stack.pop_back();
        continue;
      }
      const std::size_t k = next++;
      if (!w(uv, k)) continue;
      if (color[k] == Color::grey) {
        // Back edge v -> k closes a cycle k -> ... -> v.
        CycleResult res;
        res.acyclic = false;
        for (int u = v; u != static_cast<int>(k); u = parent[static_cast<std::size_t>(u)])
          res.cycle.push_back(u);
        res.cycle.push_back(static_cast<int>(k));
        std::reverse(res.cycle.begin(), res.cycle.end());
        return res;
      }
      if (color[k] == Color::white) {
        color[k] = Color::grey;
        parent[k] = v;
        stack.emplace_back(static_cast<int>(k), 0);
      }
    }
  }
  return {};
}

std::optional<int> nilpotency_index(const SignPattern& w) {
  const std::size_t n = w.size();
  if (w.is_zero()) return 1;
  SignPattern power = w;
  for (std::size_t k = 2; k <= n; ++k) {
    power = power * w;
    if (power.is_zero()) return static_cast<int>(k);
  }
  return std::nullopt;
}

namespace {

std::vector<int> subset_indices(std::uint32_t mask) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(std::popcount(mask)));
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1U) idx.push_back(i);
  return idx;
}

__extension__ using i128 = __int128;

// Fraction-free Gaussian elimination (Bareiss); exact for integer input.
long long bareiss_determinant(std::vector<long long> a, std::size_t n) {
  if (n == 0) return 1;
  long long sign = 1;
  long long prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a[piv * n + k] == 0) ++piv;
      if (piv == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[piv * n + c]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        i128 v = static_cast<i128>(a[i * n + j]) * a[k * n + k] -
                     static_cast<i128>(a[i * n + k]) * a[k * n + j];
        a[i * n + j] = static_cast<long long>(v / prev);
      }
    }
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

void check_dimension(std::size_t n) {
  if (n > kMaxMinorDimension)
    throw DimensionError("principal minor enumeration is limited to n <= 22, got n = " +
                         std::to_string(n));
}

} // namespace

MinorsResult principal_minors_all_zero(const Matrix& m, double tol) {
  const std::size_t n = m.size();
  check_dimension(n);
  const std::uint32_t count = n == 0 ? 0 : (1U << n);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    auto idx = subset_indices(mask);
    Matrix sub = m.principal(idx);
    double scale = 1.0;
    for (std::size_t r = 0; r < sub.size(); ++r) {
      double row_max = 0.0;
      for (double v : sub.row(r)) row_max = std::max(row_max, std::fabs(v));
      scale *= row_max;
    }
    scale = std::max(1.0, scale);
    double det = determinant(sub);
    if (std::fabs(det) > tol * scale) return {false, std::move(idx), det};
  }
  return {};
}

MinorsResult principal_minors_all_zero(const SignPattern& w) {
  const std::size_t n = w.size();
  check_dimension(n);
  const std::uint32_t count = n == 0 ? 0 : (1U << n);
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    auto idx = subset_indices(mask);
    const std::size_t k = idx.size();
    std::vector<long long> a(k * k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c)
        a[r * k + c] = w(static_cast<std::size_t>(idx[r]), static_cast<std::size_t>(idx[c])) ? 1 : 0;
    long long det = bareiss_determinant(std::move(a), k);
    if (det != 0) return {false, std::move(idx), static_cast<double>(det)};
  }
  return {};
}

ProductResult product_condition(const SignPattern& w) {
  const std::size_t n = w.size();
  // reach[l][v]: some walk with l arrows ends at v.
  std::vector<std::vector<std::uint8_t>> reach(n + 1, std::vector<std::uint8_t>(n, 0));
  std::fill(reach[0].begin(), reach[0].end(), 1);
  for (std::size_t l = 1; l <= n; ++l)
    for (std::size_t u = 0; u < n; ++u) {
      if (!reach[l - 1][u]) continue;
      for (std::size_t v = 0; v < n; ++v)
        if (w(u, v)) reach[l][v] = 1;
    }

  auto end = std::find(reach[n].begin(), reach[n].end(), 1);
  if (n == 0 || end == reach[n].end()) return {};

  ProductResult res;
  res.all_zero = false;
  res.walk.assign(n + 1, 0);
  std::size_t v = static_cast<std::size_t>(end - reach[n].begin());
  res.walk[n] = static_cast<int>(v);
  for (std::size_t l = n; l > 0; --l) {
    std::size_t u = 0;
    while (!(reach[l - 1][u] && w(u, v))) ++u;
    res.walk[l - 1] = static_cast<int>(u);
    v = u;
  }
  return res;
}

CriteriaReport robust_fts_report(const BoundaryMatrix& p, double tol) {
  CriteriaReport rep;
  rep.n = p.size();
  const SignPattern w = sign_pattern(p);

  const auto cyc = is_acyclic(w);
  rep.acyclic = cyc.acyclic;
  rep.cycle_witness = cyc.cycle;

  rep.k0 = nilpotency_index(w);

  const auto mw = principal_minors_all_zero(w);
  rep.minors_w_zero = mw.all_zero;
  rep.minor_witness = mw.witness;

  if (p.is_constant()) {
    const auto mp = principal_minors_all_zero(p.constant_matrix(), tol);
    rep.minors_p_zero = mp.all_zero;
    rep.minor_p_witness = mp.witness;
  }

  const auto prod = product_condition(w);
  rep.product_zero = prod.all_zero;
  rep.walk_witness = prod.walk;

  const bool nilpotent = rep.k0.has_value();
  if (rep.acyclic != nilpotent || rep.acyclic != rep.minors_w_zero ||
      rep.acyclic != rep.product_zero) {
    throw InconsistencyError(
        "robust FTS criteria disagree: acyclic=" + std::to_string(rep.acyclic) +
        " nilpotent=" + std::to_string(nilpotent) + " minors_W_zero=" +
        std::to_string(rep.minors_w_zero) + " product_zero=" + std::to_string(rep.product_zero));
  }
  rep.robust_fts = rep.acyclic;
  return rep;
}

} // namespace fts
