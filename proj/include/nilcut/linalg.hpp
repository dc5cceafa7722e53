#pragma once

// Dense matrices over an exact field (cyclotomic numbers, rationals) with
// Gauss-Jordan elimination, plus conversion to Eigen for numerics.

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nilcut/cyclotomic.hpp"

namespace nilcut {

inline bool is_zero_value(const Cyclotomic& x) { return x.is_zero(); }
inline Cyclotomic conj_value(const Cyclotomic& x) { return x.conj(); }
inline std::complex<double> to_complex_value(const Cyclotomic& x) { return x.to_complex(); }

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  static Matrix scalar(std::size_t n, const T& s) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = s;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
    Matrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (is_zero_value(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          if (!is_zero_value(o(k, j))) out(i, j) += a * o(k, j);
        }
      }
    }
    return out;
  }
  Matrix operator+(const Matrix& o) const {
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += o.data_[i];
    return out;
  }
  Matrix operator-(const Matrix& o) const {
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= o.data_[i];
    return out;
  }
  Matrix scaled(const T& s) const {
    Matrix out = *this;
    for (auto& x : out.data_) x *= s;
    return out;
  }
  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj_value((*this)(i, j));
    }
    return out;
  }
  bool is_zero() const {
    for (const auto& x : data_) {
      if (!is_zero_value(x)) return false;
    }
    return true;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Eigen::MatrixXcd to_eigen() const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = to_complex_value((*this)(i, j));
    }
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using CycMatrix = Matrix<Cyclotomic>;

template <class T>
struct Rref {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;  // pivot column of each non-zero row
};

/// Reduced row echelon form over a field.
template <class T>
Rref<T> rref(Matrix<T> m) {
  Rref<T> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && is_zero_value(m(p, col))) ++p;
    if (p == m.rows()) continue;
    if (p != row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    }
    const T inv = m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || is_zero_value(m(i, col))) continue;
      const T f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (!is_zero_value(m(row, j))) m(i, j) -= f * m(row, j);
      }
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).pivots.size();
}

/// Basis of {v : m v = 0}, one vector per free column.
template <class T>
std::vector<std::vector<T>> null_space(const Matrix<T>& m) {
  Rref<T> r = rref(m);
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto c : r.pivots) is_pivot[c] = 1;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(m.cols());
    v[free] = T(1);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves a x = b (b may have several columns); nullopt if inconsistent.
template <class T>
std::optional<Matrix<T>> solve(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  Matrix<T> aug(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
  }
  Rref<T> r = rref(std::move(aug));
  Matrix<T> x(a.cols(), b.cols());
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    const std::size_t c = r.pivots[i];
    if (c >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(c, j) = r.reduced(i, a.cols() + j);
  }
  return x;
}

}  // namespace nilcut
