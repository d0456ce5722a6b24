#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace envsos {

using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (whitespace tolerated). Throws ParseError.
Rational parse_rational(std::string_view text);

/// Always "p/q", including "1/1" and "0/1"; used by every JSON writer.
std::string rational_to_json(const Rational& q);

/// Exact Gaussian rational re + im*i.
class Scalar {
 public:
  Scalar() = default;
  Scalar(int v) : re_(v) {}  // NOLINT: implicit on purpose, mirrors mpq_class
  Scalar(Rational re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  static Scalar i() { return Scalar(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  Scalar conj() const { return Scalar(re_, -im_); }
  /// |z|^2, always real.
  Rational norm2() const { return re_ * re_ + im_ * im_; }

  Scalar& operator+=(const Scalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Scalar& operator-=(const Scalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Scalar& operator*=(const Scalar& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    im_ = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    return *this;
  }
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  friend Scalar operator-(const Scalar& a) { return Scalar(-a.re_, -a.im_); }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  /// "p/q" when real, "p/q+r/s i" otherwise (the JSON matrix-entry format).
  std::string to_json() const;
  /// Parses the to_json() format; also accepts a bare "r/s i".
  static Scalar from_json(std::string_view text);

  double re_double() const { return re_.get_d(); }
  double im_double() const { return im_.get_d(); }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline Scalar conj(const Scalar& s) { return s.conj(); }
inline Rational conj(const Rational& q) { return q; }
inline bool is_zero(const Scalar& s) { return s.is_zero(); }
inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
/// Real part, used by the Hermitian LDL to read pivot signs.
inline const Rational& real_part(const Scalar& s) { return s.re(); }
inline const Rational& real_part(const Rational& q) { return q; }

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace envsos
