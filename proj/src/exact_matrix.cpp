#include "envsos/exact_matrix.hpp"

namespace envsos {

CMatrix to_complex(const QMatrix& m) {
  CMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Scalar(m(i, j));
  return out;
}

template <typename T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> a = m;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && is_zero(a(piv, col))) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    const T p = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || is_zero(a(i, col))) continue;
      const T f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (!is_zero(a(col, j))) a(i, j) -= f * a(col, j);
        if (!is_zero(inv(col, j))) inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <typename T>
LdlResult<T> hermitian_ldl(const Matrix<T>& h) {
  if (!is_hermitian(h)) throw std::invalid_argument("hermitian_ldl: matrix is not Hermitian");
  const std::size_t n = h.rows();
  LdlResult<T> res;
  Matrix<T> w = h;
  res.lower = Matrix<T>::identity(n);
  res.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.perm[i] = i;

  auto swap_index = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) std::swap(w(a, j), w(b, j));
    for (std::size_t i = 0; i < n; ++i) std::swap(w(i, a), w(i, b));
    for (std::size_t j = 0; j < std::min(a, b); ++j) std::swap(res.lower(a, j), res.lower(b, j));
    std::swap(res.perm[a], res.perm[b]);
  };

  // Solves L^H phi_p = y and maps phi_p back to original coordinates.
  auto finish_witness = [&](std::vector<T> y) {
    std::vector<T> phi_p(n, T(0));
    for (std::size_t i = n; i-- > 0;) {
      T v = y[i];
      for (std::size_t j = i + 1; j < n; ++j)
        if (!is_zero(res.lower(j, i))) v -= conj(res.lower(j, i)) * phi_p[j];
      phi_p[i] = v;
    }
    res.witness.assign(n, T(0));
    for (std::size_t i = 0; i < n; ++i) res.witness[res.perm[i]] = phi_p[i];
    const auto hv = h.apply(res.witness);
    T q(0);
    for (std::size_t i = 0; i < n; ++i) q += conj(res.witness[i]) * hv[i];
    res.witness_value = real_part(q);
    res.psd = false;
  };

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t r = k;
    while (r < n && is_zero(w(r, r))) ++r;
    if (r == n) {
      for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = k; j < n; ++j)
          if (i != j && !is_zero(w(i, j))) {
            std::vector<T> y(n, T(0));
            y[i] = T(1);
            y[j] = -conj(w(i, j));
            finish_witness(std::move(y));
            return res;
          }
      res.psd = true;
      return res;
    }
    // Prefer a negative pivot so a witness surfaces immediately.
    for (std::size_t s = r; s < n; ++s)
      if (sgn(real_part(w(s, s))) < 0) {
        r = s;
        break;
      }
    swap_index(k, r);
    const T d = w(k, k);
    if (sgn(real_part(d)) < 0) {
      std::vector<T> y(n, T(0));
      y[k] = T(1);
      finish_witness(std::move(y));
      return res;
    }
    res.pivots.push_back(real_part(d));
    for (std::size_t i = k + 1; i < n; ++i) res.lower(i, k) = w(i, k) / d;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (is_zero(w(i, k))) continue;
      for (std::size_t j = k + 1; j < n; ++j)
        if (!is_zero(w(k, j))) w(i, j) -= res.lower(i, k) * w(k, j);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      w(i, k) = T(0);
      w(k, i) = T(0);
    }
  }
  res.psd = true;
  return res;
}

template <typename T>
void SpanBasis<T>::reduce(std::vector<T>& v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::size_t pc = pivots_[r];
    if (is_zero(v[pc])) continue;
    const T f = v[pc];
    for (std::size_t j = 0; j < n_; ++j)
      if (!is_zero(rows_[r][j])) v[j] -= f * rows_[r][j];
  }
}

template <typename T>
bool SpanBasis<T>::add(std::vector<T> v) {
  if (v.size() != n_) throw std::invalid_argument("SpanBasis: wrong vector length");
  reduce(v);
  std::size_t pc = 0;
  while (pc < n_ && is_zero(v[pc])) ++pc;
  if (pc == n_) return false;
  const T p = v[pc];
  for (auto& x : v) x /= p;
  // Keep existing rows reduced against the new pivot so reduce() stays one pass.
  for (auto& row : rows_) {
    if (is_zero(row[pc])) continue;
    const T f = row[pc];
    for (std::size_t j = 0; j < n_; ++j)
      if (!is_zero(v[j])) row[j] -= f * v[j];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(pc);
  return true;
}

template <typename T>
bool SpanBasis<T>::contains(std::vector<T> v) const {
  reduce(v);
  for (const auto& x : v)
    if (!is_zero(x)) return false;
  return true;
}

std::vector<std::size_t> independent_rows(const QMatrix& a) {
  SpanBasis<Rational> span(a.cols());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::vector<Rational> row(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) row[j] = a(i, j);
    if (span.add(std::move(row))) out.push_back(i);
  }
  return out;
}

QMatrix nullspace(const QMatrix& a) {
  const std::size_t n = a.cols();
  // Reduced row echelon form.
  QMatrix r = a;
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < r.rows(); ++col) {
    std::size_t piv = row;
    while (piv < r.rows() && sgn(r(piv, col)) == 0) ++piv;
    if (piv == r.rows()) continue;
    for (std::size_t j = 0; j < n; ++j) std::swap(r(piv, j), r(row, j));
    const Rational p = r(row, col);
    for (std::size_t j = 0; j < n; ++j) r(row, j) /= p;
    for (std::size_t i = 0; i < r.rows(); ++i) {
      if (i == row || sgn(r(i, col)) == 0) continue;
      const Rational f = r(i, col);
      for (std::size_t j = 0; j < n; ++j) r(i, j) -= f * r(row, j);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  QMatrix basis(n, free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    basis(free_cols[f], f) = 1;
    for (std::size_t p = 0; p < pivot_cols.size(); ++p) basis(pivot_cols[p], f) = -r(p, free_cols[f]);
  }
  return basis;
}

std::string render_matrix(const CMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + m(i, j).to_json();
    out += "]";
  }
  return out + "]";
}

template std::optional<QMatrix> inverse(const QMatrix&);
template std::optional<CMatrix> inverse(const CMatrix&);
template LdlResult<Rational> hermitian_ldl(const QMatrix&);
template LdlResult<Scalar> hermitian_ldl(const CMatrix&);
template class SpanBasis<Rational>;
template class SpanBasis<Scalar>;

}  // namespace envsos
