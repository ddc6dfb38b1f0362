#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace fts {

// Dense row-major square matrix of doubles. Sizes here are tiny (n <= 22).
class Matrix {
public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

  std::span<const double> row(std::size_t r) const { return {data_.data() + r * n_, n_}; }

  // Restriction to the rows and columns listed in `idx` (in that order).
  Matrix principal(std::span<const int> idx) const;

  double max_abs() const;

  bool operator==(const Matrix&) const = default;

private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Determinant by LU factorisation with partial pivoting. Exact zero pivots give 0.
double determinant(Matrix m);

} // namespace fts
