#pragma once

// Shared helpers for the test suites: a seeded random element generator and
// an independent word-rewriting oracle for PBW normal forms.

#include <map>
#include <random>
#include <string>
#include <vector>

#include "envsos/pbw.hpp"

namespace envsos::testing {

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"abelian(3)", "su2", "heisenberg3", "affine_line", "sl2r"};
  return names;
}

inline Rational random_rational(std::mt19937_64& rng, int span = 3, int max_den = 3) {
  std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline Scalar random_scalar(std::mt19937_64& rng, bool complex = true) {
  return complex ? Scalar(random_rational(rng), random_rational(rng)) : Scalar(random_rational(rng));
}

/// A sparse random element: `terms` random monomials of degree <= max_degree.
inline Element random_element(const AlgebraPtr& alg, std::mt19937_64& rng, unsigned max_degree, int terms = 3,
                              bool complex = true) {
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  std::uniform_int_distribution<std::size_t> var(0, alg->dim() - 1);
  Element e(alg);
  for (int t = 0; t < terms; ++t) {
    Monomial m(alg->dim(), 0);
    const unsigned d = deg(rng);
    for (unsigned r = 0; r < d; ++r) ++m[var(rng)];
    e.add_term(m, random_scalar(rng, complex));
  }
  return e;
}

/// Straightening by repeatedly rewriting the leftmost descent of a word. It
/// shares nothing with Algebra's right-insertion recursion and cache.
inline Element straighten_word_oracle(const AlgebraPtr& alg, const std::vector<unsigned>& word,
                                      const Scalar& coeff = Scalar(1)) {
  const auto& lie = alg->lie();
  std::map<std::vector<unsigned>, Scalar> pending{{word, coeff}};
  Element out(alg);
  while (!pending.empty()) {
    auto node = pending.extract(pending.begin());
    const auto& w = node.key();
    std::size_t p = 0;
    while (p + 1 < w.size() && w[p] <= w[p + 1]) ++p;
    if (p + 1 >= w.size()) {
      Monomial m(alg->dim(), 0);
      for (unsigned j : w) ++m[j];
      out.add_term(m, node.mapped());
      continue;
    }
    std::vector<unsigned> swapped = w;
    std::swap(swapped[p], swapped[p + 1]);
    pending[swapped] += node.mapped();
    for (std::size_t k = 0; k < alg->dim(); ++k) {
      const Rational& c = lie.c(w[p], w[p + 1], k);
      if (sgn(c) == 0) continue;
      std::vector<unsigned> shorter(w.begin(), w.begin() + p);
      shorter.push_back(static_cast<unsigned>(k));
      shorter.insert(shorter.end(), w.begin() + p + 2, w.end());
      pending[shorter] += Scalar(c) * node.mapped();
    }
  }
  return out;
}

/// Product via the oracle: expands every pair of monomials into a word.
inline Element oracle_product(const Element& a, const Element& b) {
  Element out(a.algebra());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<unsigned> w;
      for (const auto* m : {&ma, &mb})
        for (unsigned j = 0; j < m->size(); ++j)
          for (unsigned r = 0; r < (*m)[j]; ++r) w.push_back(j);
      out += straighten_word_oracle(a.algebra(), w, ca * cb);
    }
  return out;
}

}  // namespace envsos::testing
