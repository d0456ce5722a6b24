#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "envsos/lie_algebra.hpp"
#include "envsos/scalar.hpp"

namespace envsos {

/// PBW monomial x_1^{k_1} ... x_d^{k_d}, stored as its exponent vector.
using Monomial = std::vector<unsigned>;

unsigned total_degree(const Monomial& m);

/// Canonical term order: ascending total degree, then descending
/// lexicographic exponent vector (x1^2 < x1*x2 < x2^2 < x1*x3 ...).
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// All exponent vectors in `dim` variables with total degree <= max_degree,
/// in canonical order.
std::vector<Monomial> monomials_up_to(std::size_t dim, unsigned max_degree);
/// Exponent vectors of total degree exactly `degree`, canonical order.
std::vector<Monomial> monomials_of_degree(std::size_t dim, unsigned degree);

/// The enveloping algebra of a validated Lie algebra. Owns the straightening
/// cache, so elements share it through an AlgebraPtr.
class Algebra {
 public:
  using Terms = std::vector<std::pair<Monomial, Rational>>;

  explicit Algebra(LieAlgebra lie) : lie_(std::move(lie)) {}

  const LieAlgebra& lie() const { return lie_; }
  std::size_t dim() const { return lie_.dim(); }

  /// Normal form of m * x_j.
  std::shared_ptr<const Terms> times_generator(const Monomial& m, unsigned j) const;
  /// Normal form of m1 * m2.
  std::shared_ptr<const Terms> times_monomial(const Monomial& m1, const Monomial& m2) const;

  bool same_as(const Algebra& other) const;

 private:
  LieAlgebra lie_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<Monomial, unsigned>, std::shared_ptr<const Terms>> gen_cache_;
  mutable std::map<std::pair<Monomial, Monomial>, std::shared_ptr<const Terms>> mono_cache_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

inline AlgebraPtr make_algebra(LieAlgebra lie) { return std::make_shared<const Algebra>(std::move(lie)); }
inline AlgebraPtr make_algebra(std::string_view builtin_name) { return make_algebra(builtin(builtin_name)); }

/// Real polynomial in t_1..t_d (the associated graded algebra).
class CommutativePoly {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  explicit CommutativePoly(std::size_t nvars = 0) : nvars_(nvars) {}
  static CommutativePoly variable(std::size_t nvars, std::size_t j);
  static CommutativePoly constant(std::size_t nvars, const Rational& v);
  /// (t_1^2 + ... + t_d^2)^k
  static CommutativePoly sphere_power(std::size_t nvars, unsigned k);

  std::size_t nvars() const { return nvars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<unsigned> degree() const;
  bool is_homogeneous() const;

  void add_term(const Monomial& m, const Rational& c);
  Rational evaluate(const std::vector<Rational>& t) const;

  CommutativePoly& operator+=(const CommutativePoly& o);
  friend CommutativePoly operator+(CommutativePoly a, const CommutativePoly& b) { return a += b; }
  friend CommutativePoly operator-(const CommutativePoly& a, const CommutativePoly& b);
  friend CommutativePoly operator*(const CommutativePoly& a, const CommutativePoly& b);
  friend CommutativePoly operator*(const Rational& s, const CommutativePoly& a);
  friend bool operator==(const CommutativePoly& a, const CommutativePoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  /// "t1^4 + 2*t1^2*t2^2 - 3/4*t3" style, canonical order.
  std::string to_string() const;

 private:
  std::size_t nvars_;
  Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const CommutativePoly& p);

/// Element of the complex enveloping algebra in PBW normal form. Immutable
/// value semantics; every operation returns a new normalized element.
class Element {
 public:
  using Terms = std::map<Monomial, Scalar, MonomialOrder>;

  explicit Element(AlgebraPtr alg) : alg_(std::move(alg)) {}

  static Element zero(AlgebraPtr alg) { return Element(std::move(alg)); }
  static Element constant(AlgebraPtr alg, const Scalar& s);
  static Element one(AlgebraPtr alg) { return constant(std::move(alg), Scalar(1)); }
  /// x_j, 0-based.
  static Element generator(AlgebraPtr alg, std::size_t j);
  static Element monomial(AlgebraPtr alg, Monomial m, const Scalar& coeff = Scalar(1));
  /// Normal form of the ordered word x_{w_0} x_{w_1} ...
  static Element word(AlgebraPtr alg, const std::vector<unsigned>& letters);

  const AlgebraPtr& algebra() const { return alg_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of m (zero if absent).
  Scalar coeff(const Monomial& m) const;

  /// Filtration degree; std::nullopt encodes the -infinity degree of 0.
  std::optional<unsigned> degree() const;

  Element& operator+=(const Element& o);
  Element& operator-=(const Element& o);
  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(const Element& a);
  friend Element operator*(const Element& a, const Element& b);
  friend Element operator*(const Scalar& s, const Element& a);
  friend bool operator==(const Element& a, const Element& b);
  friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

  Element pow(unsigned n) const;

  /// Antilinear antihomomorphism with x* = -x.
  Element involution() const;
  bool is_hermitean() const { return involution() == *this; }
  /// Image of the degree-n component under x_j -> t_j. Requires n ==
  /// degree(); throws DegreeMismatch or NonRealSymbol.
  CommutativePoly principal_symbol(unsigned n) const;
  bool is_central() const;

  /// Appends `coeff * m` without normalization checks (m must be PBW).
  void add_term(const Monomial& m, const Scalar& coeff);

 private:
  void check_same(const Element& o) const;

  AlgebraPtr alg_;
  Terms terms_;
};

inline Element add(const Element& a, const Element& b) { return a + b; }
inline Element scale(const Scalar& s, const Element& e) { return s * e; }
inline Element multiply(const Element& a, const Element& b) { return a * b; }
inline Element involution(const Element& e) { return e.involution(); }

/// a = 1 - x_1^2 - ... - x_d^2.
Element canonical_a(const AlgebraPtr& alg);
/// x_0 = i*1 followed by x_1..x_d; the list the identity a = sum x_k^* x_k
/// and the odd-degree reduction run over.
std::vector<Element> extended_generators(const AlgebraPtr& alg);
/// s^* c s.
Element conjugate_by(const Element& s, const Element& c);
/// The commutator e*x_j - x_j*e for every j; all zero iff central.
std::vector<Element> central_defects(const Element& e);

/// Canonical text, e.g. "1 - x1^2 - x2^2 - x3^2", "(1/2+3/4*i)*x1*x3^2".
std::string render(const Element& e);
std::ostream& operator<<(std::ostream& os, const Element& e);

}  // namespace envsos
