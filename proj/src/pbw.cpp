#include "envsos/pbw.hpp"

#include <numeric>
#include <sstream>

#include "envsos/errors.hpp"

namespace envsos {

unsigned total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0u); }

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da < db;
  return b < a;
}

namespace {

void enumerate(std::size_t dim, std::size_t pos, unsigned remaining, Monomial& cur, std::vector<Monomial>& out) {
  if (pos + 1 == dim) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (unsigned k = remaining + 1; k-- > 0;) {
    cur[pos] = k;
    enumerate(dim, pos + 1, remaining - k, cur, out);
  }
}

using RationalTerms = std::map<Monomial, Rational, MonomialOrder>;

void accumulate_terms(RationalTerms& acc, const Algebra::Terms& terms, const Rational& factor) {
  for (const auto& [m, c] : terms) {
    auto [it, inserted] = acc.try_emplace(m, 0);
    it->second += c * factor;
    if (sgn(it->second) == 0) acc.erase(it);
  }
}

std::shared_ptr<const Algebra::Terms> freeze(const RationalTerms& acc) {
  return std::make_shared<const Algebra::Terms>(acc.begin(), acc.end());
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t dim, unsigned degree) {
  std::vector<Monomial> out;
  Monomial cur(dim, 0);
  if (dim == 0) return degree == 0 ? std::vector<Monomial>{Monomial{}} : out;
  enumerate(dim, 0, degree, cur, out);
  return out;
}

std::vector<Monomial> monomials_up_to(std::size_t dim, unsigned max_degree) {
  std::vector<Monomial> out;
  for (unsigned d = 0; d <= max_degree; ++d) {
    auto part = monomials_of_degree(dim, d);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Straightening

std::shared_ptr<const Algebra::Terms> Algebra::times_generator(const Monomial& m, unsigned j) const {
  const auto key = std::make_pair(m, j);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = gen_cache_.find(key);
    if (it != gen_cache_.end()) return it->second;
  }
  std::size_t last = m.size();
  for (std::size_t k = m.size(); k-- > 0;)
    if (m[k] > 0) {
      last = k;
      break;
    }
  RationalTerms acc;
  if (last == m.size() || last <= j) {
    Monomial out = m;
    ++out[j];
    acc.emplace(std::move(out), 1);
  } else {
    // m = m' x_k with k > j:  m' x_k x_j = (m' x_j) x_k + sum_l c^l_{kj} m' x_l
    const auto k = static_cast<unsigned>(last);
    Monomial prefix = m;
    --prefix[k];
    for (const auto& [t, c] : *times_generator(prefix, j)) accumulate_terms(acc, *times_generator(t, k), c);
    for (const auto& term : lie_.bracket(k, j))
      accumulate_terms(acc, *times_generator(prefix, static_cast<unsigned>(term.k)), term.coeff);
  }
  auto result = freeze(acc);
  std::lock_guard<std::mutex> lock(mutex_);
  gen_cache_.emplace(key, result);
  return result;
}

std::shared_ptr<const Algebra::Terms> Algebra::times_monomial(const Monomial& m1, const Monomial& m2) const {
  auto key = std::make_pair(m1, m2);
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = mono_cache_.find(key);
    if (it != mono_cache_.end()) return it->second;
  }
  RationalTerms current;
  current.emplace(m1, 1);
  for (unsigned j = 0; j < m2.size(); ++j)
    for (unsigned rep = 0; rep < m2[j]; ++rep) {
      RationalTerms next;
      for (const auto& [t, c] : current) accumulate_terms(next, *times_generator(t, j), c);
      current = std::move(next);
    }
  auto result = freeze(current);
  std::lock_guard<std::mutex> lock(mutex_);
  mono_cache_.emplace(std::move(key), result);
  return result;
}

bool Algebra::same_as(const Algebra& other) const {
  return this == &other ||
         (lie_.names() == other.lie_.names() && lie_.spec().constants == other.lie_.spec().constants);
}

// ---------------------------------------------------------------------------
// CommutativePoly

CommutativePoly CommutativePoly::variable(std::size_t nvars, std::size_t j) {
  CommutativePoly p(nvars);
  Monomial m(nvars, 0);
  m[j] = 1;
  p.add_term(m, 1);
  return p;
}

CommutativePoly CommutativePoly::constant(std::size_t nvars, const Rational& v) {
  CommutativePoly p(nvars);
  p.add_term(Monomial(nvars, 0), v);
  return p;
}

CommutativePoly CommutativePoly::sphere_power(std::size_t nvars, unsigned k) {
  CommutativePoly sq(nvars);
  for (std::size_t j = 0; j < nvars; ++j) {
    Monomial m(nvars, 0);
    m[j] = 2;
    sq.add_term(m, 1);
  }
  CommutativePoly out = constant(nvars, 1);
  for (unsigned r = 0; r < k; ++r) out = out * sq;
  return out;
}

std::optional<unsigned> CommutativePoly::degree() const {
  if (terms_.empty()) return std::nullopt;
  return total_degree(terms_.rbegin()->first);
}

bool CommutativePoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  const unsigned d = total_degree(terms_.begin()->first);
  return total_degree(terms_.rbegin()->first) == d;
}

void CommutativePoly::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, 0);
  it->second += c;
  if (sgn(it->second) == 0) terms_.erase(it);
}

Rational CommutativePoly::evaluate(const std::vector<Rational>& t) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational v = c;
    for (std::size_t j = 0; j < m.size(); ++j)
      for (unsigned r = 0; r < m[j]; ++r) v *= t[j];
    sum += v;
  }
  return sum;
}

CommutativePoly& CommutativePoly::operator+=(const CommutativePoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

CommutativePoly operator-(const CommutativePoly& a, const CommutativePoly& b) {
  CommutativePoly out = a;
  for (const auto& [m, c] : b.terms_) out.add_term(m, -c);
  return out;
}

CommutativePoly operator*(const CommutativePoly& a, const CommutativePoly& b) {
  CommutativePoly out(std::max(a.nvars_, b.nvars_));
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      Monomial m = ma;
      for (std::size_t j = 0; j < m.size(); ++j) m[j] += mb[j];
      out.add_term(m, ca * cb);
    }
  return out;
}

CommutativePoly operator*(const Rational& s, const CommutativePoly& a) {
  CommutativePoly out(a.nvars_);
  for (const auto& [m, c] : a.terms_) out.add_term(m, s * c);
  return out;
}

namespace {

std::string monomial_text(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[j] == 0) continue;
    if (!out.empty()) out += "*";
    out += names[j];
    if (m[j] > 1) out += "^" + std::to_string(m[j]);
  }
  return out;
}

// Writes one term; returns (negative, body).
std::pair<bool, std::string> term_text(const Scalar& s, const std::string& mono) {
  bool negative = false;
  std::string coeff;
  if (s.is_real() || sgn(s.re()) == 0) {
    const bool real = s.is_real();
    Rational v = real ? s.re() : s.im();
    negative = sgn(v) < 0;
    if (negative) v = -v;
    if (real) {
      coeff = (v == 1 && !mono.empty()) ? "" : v.get_str();
    } else {
      coeff = v == 1 ? "i" : v.get_str() + "*i";
    }
  } else {
    coeff = "(" + s.re().get_str() + (sgn(s.im()) < 0 ? "-" : "+") + Rational(abs(s.im())).get_str() + "*i)";
  }
  if (mono.empty()) return {negative, coeff};
  if (coeff.empty()) return {negative, mono};
  return {negative, coeff + "*" + mono};
}

std::vector<std::string> t_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < n; ++j) names.push_back("t" + std::to_string(j + 1));
  return names;
}

template <typename TermMap>
std::string render_terms(const TermMap& terms, const std::vector<std::string>& names) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    auto [neg, body] = term_text(Scalar(c), monomial_text(m, names));
    if (first)
      out += (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

}  // namespace

std::string CommutativePoly::to_string() const { return render_terms(terms_, t_names(nvars_)); }

std::ostream& operator<<(std::ostream& os, const CommutativePoly& p) { return os << p.to_string(); }

// ---------------------------------------------------------------------------
// Element

Element Element::constant(AlgebraPtr alg, const Scalar& s) {
  Element e(std::move(alg));
  e.add_term(Monomial(e.alg_->dim(), 0), s);
  return e;
}

Element Element::generator(AlgebraPtr alg, std::size_t j) {
  Monomial m(alg->dim(), 0);
  m.at(j) = 1;
  return monomial(std::move(alg), std::move(m));
}

Element Element::monomial(AlgebraPtr alg, Monomial m, const Scalar& coeff) {
  Element e(std::move(alg));
  if (m.size() != e.alg_->dim()) throw AlgebraMismatch("monomial arity differs from algebra dimension");
  e.add_term(m, coeff);
  return e;
}

Element Element::word(AlgebraPtr alg, const std::vector<unsigned>& letters) {
  RationalTerms current;
  current.emplace(Monomial(alg->dim(), 0), 1);
  for (unsigned j : letters) {
    RationalTerms next;
    for (const auto& [t, c] : current) accumulate_terms(next, *alg->times_generator(t, j), c);
    current = std::move(next);
  }
  Element e(std::move(alg));
  for (const auto& [m, c] : current) e.add_term(m, Scalar(c));
  return e;
}

void Element::add_term(const Monomial& m, const Scalar& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m);
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

Scalar Element::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar(0) : it->second;
}

std::optional<unsigned> Element::degree() const {
  if (terms_.empty()) return std::nullopt;
  return total_degree(terms_.rbegin()->first);
}

void Element::check_same(const Element& o) const {
  if (!alg_->same_as(*o.alg_)) throw AlgebraMismatch("elements belong to different algebras");
}

Element& Element::operator+=(const Element& o) {
  check_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Element& Element::operator-=(const Element& o) {
  check_same(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Element operator-(const Element& a) {
  Element out(a.alg_);
  for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
  return out;
}

Element operator*(const Scalar& s, const Element& a) {
  Element out(a.alg_);
  if (s.is_zero()) return out;
  for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, s * c);
  return out;
}

Element operator*(const Element& a, const Element& b) {
  a.check_same(b);
  Element out(a.alg_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      const Scalar cab = ca * cb;
      for (const auto& [m, c] : *a.alg_->times_monomial(ma, mb)) out.add_term(m, cab * Scalar(c));
    }
  return out;
}

bool operator==(const Element& a, const Element& b) {
  return a.alg_->same_as(*b.alg_) && a.terms_ == b.terms_;
}

Element Element::pow(unsigned n) const {
  Element out = one(alg_);
  for (unsigned r = 0; r < n; ++r) out = out * *this;
  return out;
}

Element Element::involution() const {
  Element out(alg_);
  for (const auto& [m, c] : terms_) {
    std::vector<unsigned> letters;
    for (std::size_t j = m.size(); j-- > 0;)
      for (unsigned r = 0; r < m[j]; ++r) letters.push_back(static_cast<unsigned>(j));
    const Scalar sign = (letters.size() % 2 == 0) ? Scalar(1) : Scalar(-1);
    out += (sign * c.conj()) * word(alg_, letters);
  }
  return out;
}

CommutativePoly Element::principal_symbol(unsigned n) const {
  const auto deg = degree();
  if (!deg || *deg != n)
    throw DegreeMismatch("principal symbol requested at degree " + std::to_string(n) + " but element has degree " +
                         (deg ? std::to_string(*deg) : std::string("-inf")));
  CommutativePoly p(alg_->dim());
  for (const auto& [m, c] : terms_) {
    if (total_degree(m) != n) continue;
    if (!c.is_real()) throw NonRealSymbol("top-degree coefficient " + c.to_json() + " is not real");
    p.add_term(m, c.re());
  }
  return p;
}

std::vector<Element> central_defects(const Element& e) {
  std::vector<Element> out;
  for (std::size_t j = 0; j < e.algebra()->dim(); ++j) {
    const Element x = Element::generator(e.algebra(), j);
    out.push_back(e * x - x * e);
  }
  return out;
}

bool Element::is_central() const {
  for (const auto& d : central_defects(*this))
    if (!d.is_zero()) return false;
  return true;
}

Element canonical_a(const AlgebraPtr& alg) {
  Element a = Element::one(alg);
  for (std::size_t j = 0; j < alg->dim(); ++j) {
    Monomial m(alg->dim(), 0);
    m[j] = 2;
    a.add_term(m, Scalar(-1));
  }
  return a;
}

std::vector<Element> extended_generators(const AlgebraPtr& alg) {
  std::vector<Element> out{Element::constant(alg, Scalar::i())};
  for (std::size_t j = 0; j < alg->dim(); ++j) out.push_back(Element::generator(alg, j));
  return out;
}

Element conjugate_by(const Element& s, const Element& c) { return s.involution() * c * s; }

std::string render(const Element& e) { return render_terms(e.terms(), e.algebra()->lie().names()); }

std::ostream& operator<<(std::ostream& os, const Element& e) { return os << render(e); }

}  // namespace envsos
