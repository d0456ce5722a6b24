#include "envsos/expr.hpp"

#include <cctype>
#include <set>

#include "envsos/errors.hpp"

namespace envsos {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t p = 0;
  while (p < s.size()) {
    const char ch = s[p];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      ++p;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t q = p;
      while (q < s.size() && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
      out.push_back({Tok::Number, s.substr(p, q - p), p});
      p = q;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t q = p;
      while (q < s.size() && (std::isalnum(static_cast<unsigned char>(s[q])) || s[q] == '_')) ++q;
      out.push_back({Tok::Ident, s.substr(p, q - p), p});
      p = q;
      continue;
    }
    Tok k;
    switch (ch) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '^': k = Tok::Caret; break;
      case '/': k = Tok::Slash; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default: throw PositionedSyntaxError(p, std::string("unexpected character '") + ch + "'");
    }
    out.push_back({k, std::string(1, ch), p});
    ++p;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(const ExprSource& src, const AlgebraPtr& alg, std::set<std::string>& active)
      : src_(src), alg_(alg), active_(active) {}

  Element run(const std::string& text) {
    toks_ = tokenize(text);
    pos_ = 0;
    Element e = expr();
    if (peek().kind != Tok::End) {
      if (peek().kind == Tok::Ident || peek().kind == Tok::Number || peek().kind == Tok::LParen)
        throw PositionedSyntaxError(peek().pos, "juxtaposition is not multiplication; insert '*'");
      throw PositionedSyntaxError(peek().pos, "unexpected '" + peek().text + "'");
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  Element expr() {
    Element acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool minus = take().kind == Tok::Minus;
      Element rhs = term();
      if (minus)
        acc -= rhs;
      else
        acc += rhs;
    }
    return acc;
  }

  Element term() {
    Element acc = unary();
    while (peek().kind == Tok::Star) {
      take();
      acc = acc * unary();
    }
    return acc;
  }

  Element unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return -unary();
    }
    return power();
  }

  Element power() {
    Element base = atom();
    if (peek().kind != Tok::Caret) return base;
    take();
    if (peek().kind == Tok::Minus) throw NegativeExponent("at position " + std::to_string(peek().pos));
    if (peek().kind != Tok::Number) throw PositionedSyntaxError(peek().pos, "expected a nonnegative integer exponent");
    const Token& t = take();
    if (t.text.size() > 6) throw PositionedSyntaxError(t.pos, "exponent too large");
    return base.pow(static_cast<unsigned>(std::stoul(t.text)));
  }

  Element atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        mpz_class num(t.text);
        mpz_class den(1);
        if (peek().kind == Tok::Slash) {
          take();
          if (peek().kind != Tok::Number) throw PositionedSyntaxError(peek().pos, "expected denominator");
          den = mpz_class(take().text);
          if (den == 0) throw PositionedSyntaxError(t.pos, "zero denominator");
        }
        Rational q(num, den);
        q.canonicalize();
        return Element::constant(alg_, Scalar(q));
      }
      case Tok::Ident: {
        take();
        return identifier(t);
      }
      case Tok::LParen: {
        take();
        Element e = expr();
        if (peek().kind != Tok::RParen) throw PositionedSyntaxError(peek().pos, "expected ')'");
        take();
        return e;
      }
      case Tok::End:
        throw PositionedSyntaxError(t.pos, "unexpected end of expression");
      default:
        throw PositionedSyntaxError(t.pos, "unexpected '" + t.text + "'");
    }
  }

  Element identifier(const Token& t) {
    const auto& names = alg_->lie().names();
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == t.text) return Element::generator(alg_, j);
    auto it = src_.aliases.find(t.text);
    if (it != src_.aliases.end()) {
      if (active_.count(t.text)) throw CyclicAlias("alias '" + t.text + "' refers to itself");
      active_.insert(t.text);
      Parser inner(src_, alg_, active_);
      Element e = inner.run(it->second);
      active_.erase(t.text);
      return e;
    }
    if (t.text == "i") return Element::constant(alg_, Scalar::i());
    throw UnknownIdentifier("'" + t.text + "' at position " + std::to_string(t.pos));
  }

  const ExprSource& src_;
  const AlgebraPtr& alg_;
  std::set<std::string>& active_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Element parse(const ExprSource& src, const AlgebraPtr& alg) {
  std::set<std::string> active;
  // Every alias is checked for cycles up front, even unused ones.
  for (const auto& [name, body] : src.aliases) {
    active.insert(name);
    Parser(src, alg, active).run(body);
    active.erase(name);
  }
  return Parser(src, alg, active).run(src.text);
}

std::map<std::string, std::string> parse_alias_list(const std::vector<std::string>& defs) {
  std::map<std::string, std::string> out;
  for (const auto& d : defs) {
    const auto eq = d.find('=');
    if (eq == std::string::npos || eq == 0) throw PositionedSyntaxError(0, "alias must look like NAME=EXPR: '" + d + "'");
    std::string name = d.substr(0, eq);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    out[name] = d.substr(eq + 1);
  }
  return out;
}

}  // namespace envsos
