#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "envsos/scalar.hpp"

namespace envsos {

/// Dense row-major matrix over an exact field (Rational or Scalar).
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj((*this)(i, j));
    return out;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!envsos::is_zero(v)) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& o) {
    check_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& v : a.data_) v = s * v;
    return a;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (envsos::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!envsos::is_zero(b(k, j))) out(i, j) += aik * b(k, j);
      }
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (!envsos::is_zero((*this)(i, j))) out[i] += (*this)(i, j) * v[j];
    return out;
  }

 private:
  void check_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using QMatrix = Matrix<Rational>;
using CMatrix = Matrix<Scalar>;

CMatrix to_complex(const QMatrix& m);

/// Exact inverse by Gauss-Jordan; nullopt when singular.
template <typename T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m);

/// Outcome of the exact Hermitian LDL^H decomposition with diagonal pivoting.
/// When the matrix is not PSD, `witness` satisfies witness^H H witness =
/// `witness_value` < 0.
template <typename T>
struct LdlResult {
  bool psd = false;
  std::vector<std::size_t> perm;    // pivot order (original indices)
  std::vector<Rational> pivots;     // nonzero pivots, in elimination order
  Matrix<T> lower;                  // unit lower factor in permuted coordinates
  std::vector<T> witness;
  Rational witness_value{0};
};

/// Decides positive semidefiniteness of a Hermitian matrix exactly. A zero
/// pivot whose remaining row is not identically zero means indefinite.
/// Throws std::invalid_argument if `h` is not Hermitian.
template <typename T>
LdlResult<T> hermitian_ldl(const Matrix<T>& h);

template <typename T>
bool is_hermitian(const Matrix<T>& h) {
  return h.rows() == h.cols() && h.adjoint() == h;
}

/// Incremental row-echelon basis of a subspace of T^n.
template <typename T>
class SpanBasis {
 public:
  explicit SpanBasis(std::size_t n) : n_(n) {}
  /// Adds v; returns true if it enlarged the span.
  bool add(std::vector<T> v);
  bool contains(std::vector<T> v) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t ambient() const { return n_; }

 private:
  void reduce(std::vector<T>& v) const;
  std::size_t n_;
  std::vector<std::vector<T>> rows_;  // each normalized to 1 at pivots_[r]
  std::vector<std::size_t> pivots_;
};

/// Indices of a maximal linearly independent subset of rows, in order.
std::vector<std::size_t> independent_rows(const QMatrix& a);
/// Rational basis of {x : a x = 0}, returned as columns.
QMatrix nullspace(const QMatrix& a);

std::string render_matrix(const CMatrix& m);

}  // namespace envsos
