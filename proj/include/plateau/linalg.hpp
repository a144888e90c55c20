#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plateau/arith.hpp"
#include "plateau/error.hpp"

namespace plateau {

/// A point of F_p^n (or of a product space, after flattening) as coordinates in [0, p).
using Point = std::vector<std::uint32_t>;

/// Dense matrix over F_p, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::uint32_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static Matrix identity(std::uint32_t p, std::size_t n) {
    Matrix m(p, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(std::uint32_t p, const std::vector<Point>& rows) {
    require(!rows.empty(), ErrorKind::invalid_argument, "matrix needs at least one row");
    Matrix m(p, rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == m.cols_, ErrorKind::invalid_argument, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) {
        require(rows[i][j] < p, ErrorKind::invalid_argument, "matrix entry outside F_p");
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  std::uint32_t p() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::uint32_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Point row(std::size_t i) const {
    return Point(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  std::vector<Point> row_list() const {
    std::vector<Point> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }

  Matrix transpose() const {
    Matrix t(p_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_ && a.p_ == b.p_, ErrorKind::invalid_argument,
            "matrix product shape mismatch");
    Matrix c(a.p_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t l = 0; l < a.cols_; ++l) {
        const std::uint64_t x = a(i, l);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          c(i, j) = static_cast<std::uint32_t>((c(i, j) + x * b(l, j)) % a.p_);
      }
    return c;
  }

  /// Row vector times matrix: v * M.
  Point left_apply(std::span<const std::uint32_t> v) const {
    require(v.size() == rows_, ErrorKind::invalid_argument, "vector/matrix shape mismatch");
    Point out(cols_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const std::uint64_t x = v[i];
      if (x == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j)
        out[j] = static_cast<std::uint32_t>((out[j] + x * (*this)(i, j)) % p_);
    }
    return out;
  }

  /// Reduced row echelon form; returns (rref, rank). Pivot entries are 1.
  std::pair<Matrix, std::size_t> rref() const {
    Matrix m = *this;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
      std::size_t pivot = rank;
      while (pivot < rows_ && m(pivot, col) == 0) ++pivot;
      if (pivot == rows_) continue;
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m(pivot, j), m(rank, j));
      const std::uint32_t inv = inverse_mod(m(rank, col));
      for (std::size_t j = 0; j < cols_; ++j)
        m(rank, j) = static_cast<std::uint32_t>(std::uint64_t(m(rank, j)) * inv % p_);
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == rank || m(i, col) == 0) continue;
        const std::uint64_t factor = m(i, col);
        for (std::size_t j = 0; j < cols_; ++j)
          m(i, j) = static_cast<std::uint32_t>((m(i, j) + (p_ - factor) * m(rank, j)) % p_);
      }
      ++rank;
    }
    return {m, rank};
  }

  std::size_t rank() const { return rref().second; }

  Matrix inverse() const {
    require(rows_ == cols_, ErrorKind::invalid_argument, "inverse of non-square matrix");
    Matrix aug(p_, rows_, 2 * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = 1;
    }
    auto [r, rank] = aug.rref();
    for (std::size_t i = 0; i < rows_; ++i)
      require(r(i, i) == 1, ErrorKind::invalid_argument, "matrix is singular over F_p");
    Matrix inv(p_, rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) inv(i, j) = r(i, cols_ + j);
    return inv;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::uint32_t inverse_mod(std::uint32_t a) const {
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<std::uint32_t>(result);
  }

  std::uint32_t p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

inline std::uint32_t dot(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                         std::uint32_t p) {
  require(a.size() == b.size(), ErrorKind::invalid_argument, "dot product dimension mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::uint64_t(a[i]) * b[i];
  return static_cast<std::uint32_t>(acc % p);
}

}  // namespace plateau
