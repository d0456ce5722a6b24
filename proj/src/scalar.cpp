#include "envsos/scalar.hpp"

#include <cctype>

#include "envsos/errors.hpp"

namespace envsos {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  std::string_view num = trim(s.substr(0, slash));
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : trim(s.substr(slash + 1));
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
    throw ParseError("not a rational literal: '" + std::string(text) + "'");
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  mpz_class p(n), q{std::string(den)};
  if (q == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

std::string rational_to_json(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Scalar& Scalar::operator/=(const Scalar& o) {
  Rational n = o.norm2();
  if (sgn(n) == 0) throw std::domain_error("division by zero scalar");
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

std::string Scalar::to_json() const {
  if (is_real()) return rational_to_json(re_);
  std::string out = rational_to_json(re_);
  if (sgn(im_) < 0)
    out += "-" + rational_to_json(-im_);
  else
    out += "+" + rational_to_json(im_);
  return out + " i";
}

Scalar Scalar::from_json(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty() || s.back() != 'i') return Scalar(parse_rational(s));
  s.remove_suffix(1);
  s = trim(s);
  // Split at the last sign that is not the leading one.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return Scalar(Rational(0), parse_rational(s));
  Rational re = parse_rational(s.substr(0, split));
  Rational im = parse_rational(s.substr(split + 1));
  if (s[split] == '-') im = -im;
  return Scalar(re, im);
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_json(); }

}  // namespace envsos
