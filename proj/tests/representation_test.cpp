#include "envsos/representation.hpp"

#include <gtest/gtest.h>

#include "envsos/errors.hpp"
#include "envsos/expr.hpp"
#include "test_util.hpp"

namespace envsos {
namespace {

CMatrix scalar_identity(std::size_t n, const Rational& v) { return Scalar(v) * CMatrix::identity(n); }

Rational quad_form(const CMatrix& h, const std::vector<Scalar>& v) {
  Scalar s(0);
  const auto hv = h.apply(v);
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i].conj() * hv[i];
  return s.re();
}

std::vector<FiniteDimRep> spin_reps(const AlgebraPtr& su2, int twice_max) {
  std::vector<FiniteDimRep> out;
  for (int t = 0; t <= twice_max; ++t) {
    Rational l(t, 2);
    l.canonicalize();
    out.push_back(make_spin_rep(su2, l));
  }
  return out;
}

TEST(SpinRep, CasimirIsScalar) {
  const auto su2 = make_algebra("su2");
  const auto a = canonical_a(su2);
  EXPECT_EQ(evaluate(make_spin_rep(su2, Rational(1, 2)), a), scalar_identity(2, Rational(7, 4)));
  for (int t = 0; t <= 8; ++t) {
    Rational l(t, 2);
    l.canonicalize();
    EXPECT_EQ(evaluate(make_spin_rep(su2, l), a), scalar_identity(t + 1, l * l + l + 1)) << l;
  }
}

TEST(SpinRep, TrivialRepresentation) {
  const auto rep = make_spin_rep(make_algebra("su2"), 0);
  EXPECT_EQ(rep.size(), 1u);
  for (const auto& m : rep.mats()) EXPECT_TRUE(m.is_zero());
  EXPECT_EQ(rep.metric(), std::vector<Rational>{1});
}

TEST(SpinRep, SpectrumOfHIsTheWeightSet) {
  // H = -i x1 acts diagonally on the weight basis with eigenvalues -l..l.
  const auto su2 = make_algebra("su2");
  const auto h = parse("-i*x1", su2);
  for (int t = 0; t <= 6; ++t) {
    const auto rep = make_spin_rep(su2, Rational(t, 2));
    const auto m = evaluate(rep, h);
    std::vector<Rational> diag;
    for (std::size_t i = 0; i < rep.size(); ++i) {
      for (std::size_t j = 0; j < rep.size(); ++j)
        if (i != j) EXPECT_TRUE(is_zero(m(i, j)));
      EXPECT_TRUE(is_zero(m(i, i).im()));
      diag.push_back(m(i, i).re());
    }
    std::sort(diag.begin(), diag.end());
    for (int k = 0; k <= t; ++k) EXPECT_EQ(2 * diag[k], 2 * k - t);
  }
}

TEST(SpinRep, RejectsBadInput) {
  EXPECT_THROW(make_spin_rep(make_algebra("su2"), Rational(1, 3)), InvalidInstance);
  EXPECT_THROW(make_spin_rep(make_algebra("sl2r"), 1), InvalidInstance);
}

TEST(PointRep, Examples) {
  const auto ab1 = make_algebra("abelian(1)");
  const auto x1 = Element::generator(ab1, 0);
  EXPECT_EQ(evaluate(make_point_rep(ab1, {1}), x1.involution() * x1), CMatrix::identity(1));
  EXPECT_TRUE(make_point_rep(ab1, {0}).mats()[0].is_zero());
  const auto ab2 = make_algebra("abelian(2)");
  EXPECT_EQ(evaluate(make_point_rep(ab2, {1, 2}), canonical_a(ab2)), scalar_identity(1, 6));
  EXPECT_THROW(make_point_rep(make_algebra("su2"), {0, 0, 0}), NotAbelian);
}

TEST(FiniteDimRep, ConstructorChecksInvariants) {
  const auto su2 = make_algebra("su2");
  const auto good = make_spin_rep(su2, 1);
  auto mats = good.mats();
  std::swap(mats[0], mats[1]);
  EXPECT_THROW(FiniteDimRep(su2, mats, good.metric(), "bad"), InvalidRepresentation);
  auto metric = good.metric();
  metric[0] += 1;
  EXPECT_THROW(FiniteDimRep(su2, good.mats(), metric, "bad"), InvalidRepresentation);
  EXPECT_THROW(FiniteDimRep(su2, good.mats(), {1, 1}, "bad"), InvalidRepresentation);
}

TEST(Evaluate, UnitAndAlgebraMismatch) {
  const auto su2 = make_algebra("su2");
  const auto rep = make_spin_rep(su2, Rational(3, 2));
  EXPECT_EQ(evaluate(rep, Element::one(su2)), CMatrix::identity(4));
  EXPECT_THROW(evaluate(rep, Element::one(make_algebra("sl2r"))), AlgebraMismatch);
}

TEST(Evaluate, IsAHomomorphism) {
  std::mt19937_64 rng(77);
  const auto su2 = make_algebra("su2");
  const auto ab3 = make_algebra("abelian(3)");
  std::vector<FiniteDimRep> reps = spin_reps(su2, 3);
  reps.push_back(direct_sum(make_spin_rep(su2, Rational(1, 2)), make_spin_rep(su2, 1)));
  reps.push_back(make_point_rep(ab3, {1, Rational(-1, 2), 3}));
  for (const auto& rep : reps) {
    for (int t = 0; t < 50; ++t) {
      const auto u = testing::random_element(rep.algebra(), rng, 3);
      const auto v = testing::random_element(rep.algebra(), rng, 3);
      EXPECT_EQ(evaluate(rep, u * v), evaluate(rep, u) * evaluate(rep, v)) << rep.label();
    }
  }
}

TEST(Evaluate, RespectsInvolution) {
  std::mt19937_64 rng(78);
  const auto su2 = make_algebra("su2");
  for (const auto& rep : spin_reps(su2, 4)) {
    for (int t = 0; t < 20; ++t) {
      const auto e = testing::random_element(su2, rng, 3);
      EXPECT_EQ(rep.weighted(evaluate(rep, e.involution())), rep.weighted(evaluate(rep, e)).adjoint());
      EXPECT_EQ(evaluate(rep, e.involution()), rep.adjoint(evaluate(rep, e)));
    }
  }
}

TEST(Evaluate, CentralityInEveryRepresentation) {
  std::mt19937_64 rng(79);
  const auto su2 = make_algebra("su2");
  const auto a = canonical_a(su2);
  for (const auto& rep : spin_reps(su2, 4))
    for (int t = 0; t < 10; ++t) {
      const auto z = testing::random_element(su2, rng, 3);
      EXPECT_TRUE(evaluate(rep, z * a - a * z).is_zero());
    }
}

TEST(IsPositive, CasimirShift) {
  const auto su2 = make_algebra("su2");
  const auto e = canonical_a(su2) - Element::one(su2);
  for (const auto& rep : spin_reps(su2, 8)) EXPECT_TRUE(is_positive(rep, e).positive) << rep.label();
}

TEST(IsPositive, TwoMinusH) {
  const auto su2 = make_algebra("su2");
  const auto e = parse(ExprSource{"2 - H", {{"H", "-i*x1"}}}, su2);
  EXPECT_TRUE(is_positive(make_spin_rep(su2, 1), e).positive);
  EXPECT_TRUE(is_positive(make_spin_rep(su2, 2), e).positive);
  const auto rep = make_spin_rep(su2, Rational(5, 2));
  const auto v = is_positive(rep, e);
  ASSERT_FALSE(v.positive);
  EXPECT_LT(sgn(v.witness_value), 0);
  EXPECT_EQ(quad_form(rep.weighted(evaluate(rep, e)), v.witness), v.witness_value);
}

TEST(IsPositive, RejectsNonHermitean) {
  const auto su2 = make_algebra("su2");
  EXPECT_THROW(is_positive(make_spin_rep(su2, 1), Element::generator(su2, 0)), NotHermitean);
}

TEST(ScanDualWindow, TwoMinusH) {
  const auto su2 = make_algebra("su2");
  const std::vector<Element> f{Element::one(su2), parse(ExprSource{"2 - H", {{"H", "-i*x1"}}}, su2)};
  const auto res = scan_dual_window(f, DualWindow::spins(3));
  EXPECT_EQ(res.window, (std::vector<std::string>{"0", "1/2", "1", "3/2", "2", "5/2", "3"}));
  EXPECT_EQ(res.members, (std::vector<std::string>{"0", "1/2", "1", "3/2", "2"}));
  EXPECT_EQ(res.witnesses.count("5/2"), 1u);
  EXPECT_EQ(res.witnesses.at("3").generator, 1u);
}

TEST(ScanDualWindow, UnitGeneratorKeepsEverything) {
  const auto su2 = make_algebra("su2");
  const auto res = scan_dual_window({Element::one(su2)}, DualWindow::spins(2));
  EXPECT_EQ(res.members, res.window);
  const auto ab2 = make_algebra("abelian(2)");
  const auto grid = scan_dual_window({Element::one(ab2)}, DualWindow::grid({{0, 0}, {1, 2}}));
  EXPECT_EQ(grid.members, (std::vector<std::string>{"(0,0)", "(1,2)"}));
}

TEST(ScanDualWindow, IsolatesOneSpin) {
  const auto su2 = make_algebra("su2");
  const auto shifted = canonical_a(su2) - Scalar(3) * Element::one(su2);
  const auto res = scan_dual_window({Element::one(su2), -(shifted * shifted)}, DualWindow::spins(3));
  EXPECT_EQ(res.members, std::vector<std::string>{"1"});
}

TEST(ScanDualWindow, RequiresUnitFirst) {
  const auto su2 = make_algebra("su2");
  EXPECT_THROW(scan_dual_window({canonical_a(su2)}, DualWindow::spins(1)), InvalidInstance);
  EXPECT_THROW(scan_dual_window({Element::one(su2)}, DualWindow::grid({{0, 0, 0}})), NotAbelian);
}

}  // namespace
}  // namespace envsos
