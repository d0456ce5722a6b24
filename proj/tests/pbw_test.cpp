#include "envsos/pbw.hpp"

#include <gtest/gtest.h>

#include "envsos/errors.hpp"
#include "test_util.hpp"

namespace envsos {
namespace {

using testing::oracle_product;
using testing::random_element;
using testing::straighten_word_oracle;

Element x(const AlgebraPtr& alg, std::size_t j) { return Element::generator(alg, j); }

TEST(Pbw, AddAndScale) {
  const auto alg = make_algebra("su2");
  EXPECT_TRUE((x(alg, 0) + Scalar(-1) * x(alg, 0)).is_zero());
  const Element x0 = Scalar::i() * Element::one(alg);
  EXPECT_EQ(x0, Element::constant(alg, Scalar(0, 1)));
  EXPECT_EQ(extended_generators(alg).front(), x0);
  EXPECT_FALSE(Element::zero(alg).degree().has_value());
}

TEST(Pbw, AdditionIsCommutativeAndAssociative) {
  std::mt19937_64 rng(11);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 20; ++t) {
      const auto u = random_element(alg, rng, 3), v = random_element(alg, rng, 3), w = random_element(alg, rng, 3);
      EXPECT_EQ(u + v, v + u);
      EXPECT_EQ((u + v) + w, u + (v + w));
    }
  }
}

TEST(Pbw, Su2StraighteningRule) {
  const auto alg = make_algebra("su2");
  EXPECT_EQ(x(alg, 1) * x(alg, 0), x(alg, 0) * x(alg, 1) - x(alg, 2));
  EXPECT_EQ(render(x(alg, 1) * x(alg, 0)), "-x3 + x1*x2");
  const auto one = Element::one(alg);
  const auto e = x(alg, 2) * x(alg, 0) + Scalar(3) * one;
  EXPECT_EQ(one * e, e);
  EXPECT_EQ(e * one, e);
}

TEST(Pbw, Su2TripleProductAgreesWithOracle) {
  const auto alg = make_algebra("su2");
  const auto left = (x(alg, 0) * x(alg, 1)) * x(alg, 2);
  const auto right = x(alg, 0) * (x(alg, 1) * x(alg, 2));
  EXPECT_EQ(left, right);
  EXPECT_EQ(left, straighten_word_oracle(alg, {0, 1, 2}));
}

TEST(Pbw, MultiplicationMatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(5);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 25; ++t) {
      const auto u = random_element(alg, rng, 3), v = random_element(alg, rng, 3);
      EXPECT_EQ(u * v, oracle_product(u, v)) << name;
    }
  }
}

TEST(Pbw, ConfluenceOnRandomWords) {
  std::mt19937_64 rng(23);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    std::uniform_int_distribution<unsigned> len(0, 6), letter(0, static_cast<unsigned>(alg->dim() - 1));
    for (int t = 0; t < 40; ++t) {
      std::vector<unsigned> w(len(rng));
      for (auto& l : w) l = letter(rng);
      EXPECT_EQ(Element::word(alg, w), straighten_word_oracle(alg, w)) << name;
    }
  }
}

TEST(Pbw, RingAxioms) {
  std::mt19937_64 rng(3);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 20; ++t) {
      const auto u = random_element(alg, rng, 3), v = random_element(alg, rng, 3), w = random_element(alg, rng, 3);
      EXPECT_EQ((u * v) * w, u * (v * w)) << name;
      EXPECT_EQ(u * (v + w), u * v + u * w) << name;
      EXPECT_EQ((u + v) * w, u * w + v * w) << name;
    }
  }
}

TEST(Pbw, InvolutionExamples) {
  const auto alg = make_algebra("su2");
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(x(alg, j).involution(), -x(alg, j));
  const Scalar lam(Rational(2, 3), Rational(-5, 7));
  EXPECT_EQ(Element::constant(alg, lam).involution(), Element::constant(alg, lam.conj()));
  EXPECT_EQ((x(alg, 0) * x(alg, 1)).involution(), x(alg, 0) * x(alg, 1) - x(alg, 2));
}

TEST(Pbw, InvolutionLaws) {
  std::mt19937_64 rng(17);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 20; ++t) {
      const auto u = random_element(alg, rng, 3), v = random_element(alg, rng, 3);
      const Scalar lam = testing::random_scalar(rng);
      EXPECT_EQ((u * v).involution(), v.involution() * u.involution()) << name;
      EXPECT_EQ(u.involution().involution(), u) << name;
      EXPECT_EQ((lam * u).involution(), lam.conj() * u.involution()) << name;
    }
  }
}

TEST(Pbw, CanonicalAIsSumOfSquares) {
  std::vector<std::string> names = testing::builtin_names();
  for (int d = 1; d <= 6; ++d) names.push_back("abelian(" + std::to_string(d) + ")");
  for (const auto& name : names) {
    const auto alg = make_algebra(name);
    Element sum(alg);
    for (const auto& xk : extended_generators(alg)) sum += xk.involution() * xk;
    EXPECT_EQ(canonical_a(alg), sum) << name;
  }
  EXPECT_EQ(render(canonical_a(make_algebra("su2"))), "1 - x1^2 - x2^2 - x3^2");
  EXPECT_EQ(render(canonical_a(make_algebra("abelian(1)"))), "1 - x1^2");
}

TEST(Pbw, DegreeAndHermiticity) {
  const auto alg = make_algebra("su2");
  const auto a = canonical_a(alg);
  EXPECT_EQ(a.degree(), 2u);
  EXPECT_EQ(a.pow(2).degree(), 4u);
  EXPECT_TRUE(a.is_hermitean());
  EXPECT_FALSE(x(alg, 0).is_hermitean());
  EXPECT_TRUE((Scalar::i() * x(alg, 0)).is_hermitean());
}

TEST(Pbw, FiltrationIsGraded) {
  std::mt19937_64 rng(29);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 20; ++t) {
      const auto u = random_element(alg, rng, 3), v = random_element(alg, rng, 3);
      if (u.is_zero() || v.is_zero()) continue;
      const auto uv = u * v;
      ASSERT_TRUE(uv.degree().has_value());
      EXPECT_EQ(*uv.degree(), *u.degree() + *v.degree()) << name;
    }
  }
}

TEST(Pbw, PrincipalSymbolExamples) {
  const auto alg = make_algebra("su2");
  const auto a = canonical_a(alg);
  const auto sphere = CommutativePoly::sphere_power(3, 1);
  EXPECT_EQ(a.principal_symbol(2), Rational(-1) * sphere);
  EXPECT_EQ(a.pow(2).principal_symbol(4), sphere * sphere);
  const auto e = x(alg, 0) * x(alg, 1) - x(alg, 2);
  EXPECT_EQ(e.principal_symbol(2), CommutativePoly::variable(3, 0) * CommutativePoly::variable(3, 1));
  EXPECT_THROW(a.principal_symbol(3), DegreeMismatch);
  EXPECT_THROW((Scalar::i() * x(alg, 0) * x(alg, 1)).principal_symbol(2), NonRealSymbol);
}

TEST(Pbw, PrincipalSymbolIsMultiplicative) {
  std::mt19937_64 rng(31);
  for (const auto& name : testing::builtin_names()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 20; ++t) {
      const auto u = random_element(alg, rng, 3, 3, false), v = random_element(alg, rng, 3, 3, false);
      if (u.is_zero() || v.is_zero()) continue;
      const auto uv = u * v;
      EXPECT_EQ(uv.principal_symbol(*u.degree() + *v.degree()),
                u.principal_symbol(*u.degree()) * v.principal_symbol(*v.degree()))
          << name;
    }
  }
}

TEST(Pbw, Centrality) {
  const auto su2 = make_algebra("su2");
  EXPECT_TRUE(canonical_a(su2).is_central());
  EXPECT_TRUE(Element::one(su2).is_central());
  const auto aff = make_algebra("affine_line");
  const auto a = canonical_a(aff);
  EXPECT_FALSE(a.is_central());
  const auto defects = central_defects(a);
  // a*x2 - x2*a = -(2 x1 x2 - x2)
  EXPECT_EQ(defects[1], -(Scalar(2) * x(aff, 0) * x(aff, 1) - x(aff, 1)));
}

TEST(Pbw, ConjugateBy) {
  const auto alg = make_algebra("su2");
  const auto a = canonical_a(alg);
  const auto c = x(alg, 0) * x(alg, 0) + Scalar::i() * x(alg, 2);
  EXPECT_EQ(conjugate_by(Element::one(alg), c), c);
  EXPECT_EQ(conjugate_by(a, Element::one(alg)), a * a);
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    const auto s = random_element(alg, rng, 2);
    const auto r = random_element(alg, rng, 2);
    const auto h = r + r.involution();
    ASSERT_TRUE(h.is_hermitean());
    EXPECT_TRUE(conjugate_by(s, h).is_hermitean());
  }
}

TEST(CommutativePoly, Basics) {
  auto p = CommutativePoly::sphere_power(2, 1);
  EXPECT_TRUE(p.is_homogeneous());
  EXPECT_EQ(p.evaluate({Rational(1), Rational(2)}), 5);
  EXPECT_EQ(p.to_string(), "t1^2 + t2^2");
  p.add_term({0, 0}, 1);
  EXPECT_FALSE(p.is_homogeneous());
  EXPECT_EQ(p.degree(), 2u);
}

}  // namespace
}  // namespace envsos
