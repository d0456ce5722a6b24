// Acceptance suite: one PASS/FAIL line per criterion on stdout, exit status 1
// if any criterion fails. Details for failures go to the same line.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "envsos/audit.hpp"
#include "envsos/driver.hpp"
#include "envsos/expr.hpp"
#include "envsos/representation.hpp"
#include "envsos/sos.hpp"
#include "test_util.hpp"

namespace {

using namespace envsos;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    else detail += "; " + what;
    pass = false;
  }
};

const std::vector<std::string>& builtins() { return testing::builtin_names(); }

std::string q(const Rational& r) { return r.get_str(); }

Element hamiltonian(const AlgebraPtr& su2) { return Scalar(Rational(0), Rational(-1)) * Element::generator(su2, 0); }

std::vector<Rational> spins_up_to(const Rational& lmax) {
  std::vector<Rational> out;
  for (Rational l = 0; l <= lmax; l += Rational(1, 2)) out.push_back(l);
  return out;
}

Outcome ring_axioms() {
  Outcome o;
  std::mt19937_64 rng(101);
  for (const auto& name : builtins()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 200; ++t) {
      const auto a = testing::random_element(alg, rng, 4, 2);
      const auto b = testing::random_element(alg, rng, 4, 2);
      const auto c = testing::random_element(alg, rng, 4, 2);
      o.require((a * b) * c == a * (b * c), name + ": associativity");
      o.require(a * (b + c) == a * b + a * c, name + ": left distributivity");
      o.require((a + b) * c == a * c + b * c, name + ": right distributivity");
      if (!o.pass) return o;
    }
  }
  return o;
}

Outcome involution_laws() {
  Outcome o;
  std::mt19937_64 rng(202);
  for (const auto& name : builtins()) {
    const auto alg = make_algebra(name);
    for (int t = 0; t < 100; ++t) {
      const auto u = testing::random_element(alg, rng, 4);
      const auto v = testing::random_element(alg, rng, 4);
      o.require((u * v).involution() == v.involution() * u.involution(), name + ": (uv)* != v*u*");
      o.require(u.involution().involution() == u, name + ": u** != u");
      if (!o.pass) return o;
    }
  }
  return o;
}

Outcome casimir_as_square_sum() {
  Outcome o;
  std::vector<std::string> names{"su2", "heisenberg3", "affine_line", "sl2r"};
  for (int d = 1; d <= 6; ++d) names.push_back("abelian(" + std::to_string(d) + ")");
  for (const auto& name : names) {
    const auto alg = make_algebra(name);
    // x_0 = i * 1, so x_0^* x_0 = 1.
    const auto x0 = Element::constant(alg, Scalar::i());
    Element sum = x0.involution() * x0;
    std::string printed = "1";
    for (std::size_t k = 0; k < alg->dim(); ++k) {
      const auto xk = Element::generator(alg, k);
      sum += xk.involution() * xk;
      printed += " - x" + std::to_string(k + 1) + "^2";
    }
    o.require(canonical_a(alg) == sum, name + ": a != sum x_k^* x_k");
    o.require(canonical_a(alg) == parse(printed, alg), name + ": a != " + printed);
  }
  return o;
}

Outcome spin_representations() {
  Outcome o;
  const auto su2 = make_algebra("su2");
  const auto a = canonical_a(su2);
  const auto h = hamiltonian(su2);
  std::string spectrum_note;
  for (const auto& l : spins_up_to(3)) {
    const auto rep = make_spin_rep(su2, l);
    const auto n = rep.size();
    o.require(n == static_cast<std::size_t>(Rational(2 * l + 1).get_d()), "dimension at l = " + q(l));
    o.require(evaluate(rep, a) == Scalar(l * l + l + 1) * CMatrix::identity(n), "dU_l(a) != (l^2+l+1) I at l = " + q(l));

    // dU_l(H) is diagonal in the weight basis, so its spectrum is its diagonal.
    const auto hm = evaluate(rep, h);
    std::multiset<Rational> spectrum, expected;
    bool diagonal = true;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c && !hm(r, c).is_zero()) diagonal = false;
    o.require(diagonal, "dU_l(H) not diagonal at l = " + q(l));
    for (std::size_t r = 0; r < n; ++r) {
      o.require(hm(r, r).im() == 0, "non-real eigenvalue");
      spectrum.insert(hm(r, r).re());
    }
    for (Rational j = -l; j <= l; j += 1) expected.insert(2 * j);
    if (spectrum != expected && spectrum_note.empty()) {
      std::ostringstream os;
      os << "spectrum of dU_l(H) at l = " << q(l) << " is {";
      for (const auto& v : spectrum) os << (&v == &*spectrum.begin() ? "" : ",") << q(v);
      os << "}, expected {2j}; the value l^2+l+1 of dU_l(a) forces eigenvalues j";
      spectrum_note = os.str();
    }
  }
  o.require(spectrum_note.empty(), spectrum_note);
  return o;
}

Outcome centrality() {
  Outcome o;
  const auto su2 = make_algebra("su2");
  o.require(canonical_a(su2).is_central(), "a not central in su2");
  const auto aff = make_algebra("affine_line");
  const auto a = canonical_a(aff);
  o.require(!a.is_central(), "a central in affine_line");
  bool witness = false;
  for (std::size_t k = 0; k < aff->dim(); ++k) {
    const auto x = Element::generator(aff, k);
    witness = witness || !(testing::oracle_product(x, a) - testing::oracle_product(a, x)).is_zero();
  }
  o.require(witness, "no nonzero commutator witness in affine_line");
  return o;
}

Outcome cleared_identity() {
  Outcome o;
  for (const auto& name : builtins()) {
    const auto alg = make_algebra(name);
    const auto rep = audit_cleared_commutator(alg);
    o.require(rep.pass() && rep.entries.size() == alg->dim(), name + ": nonzero residual");
    const auto a = canonical_a(alg);
    for (const auto& e : rep.entries) {
      const auto x = Element::generator(alg, e.indices[0] - 1);
      o.require(e.lhs == testing::oracle_product(x, a) - testing::oracle_product(a, x), name + ": lhs vs oracle");
    }
  }
  const auto aff = make_algebra("affine_line");
  const auto rep = audit_cleared_commutator(aff);
  const auto expected = parse("2*x1*x2 - x2", aff);
  o.require(rep.entries.at(1).lhs == expected && rep.entries.at(1).rhs == expected,
            "affine_line k = 2 intermediate is " + render(rep.entries.at(1).lhs));
  return o;
}

Outcome operator_relations() {
  Outcome o;
  const auto su2 = make_algebra("su2");
  const auto ab2 = make_algebra("abelian(2)");
  std::vector<FiniteDimRep> reps{parse_context(su2, "spins=1/2,1"), parse_context(su2, "spins=1,2")};
  for (const auto* pt : {"point=1,2", "point=0,0", "point=-1,1/2", "point=3,-2", "point=1/3,5"})
    reps.push_back(parse_context(ab2, pt));
  for (const auto& rep : reps) {
    const auto report = audit_r_relations(OperatorAlgebraContext(rep));
    for (const auto& r : report.relations)
      o.require(r.pass && r.checks > 0, rep.label() + ": " + r.id + " residual " + r.residual);
  }
  return o;
}

Outcome planted_roundtrip() {
  Outcome o;
  std::mt19937_64 rng(808);
  const auto su2 = make_algebra("su2");
  const std::vector<Element> f{Element::one(su2), parse(ExprSource{"2 - H", {{"H", "-i*x1"}}}, su2)};
  int found = 0, inconclusive = 0;
  for (int t = 0; t < 20; ++t) {
    const unsigned degree = t % 2 == 0 ? 2 : 4;
    const auto shape = build_gram_problem(Element::one(su2), f, degree);
    std::vector<CMatrix> grams;
    for (const auto& b : shape.blocks()) {
      // Sum of n + 1 random rank-one terms z z^*.
      const auto n = b.basis.size();
      CMatrix g(n, n);
      for (std::size_t k = 0; k <= n; ++k) {
        std::vector<Scalar> z(n);
        for (auto& v : z) v = testing::random_scalar(rng);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) g(i, j) += z[i] * z[j].conj();
      }
      grams.push_back(std::move(g));
    }
    const auto c = shape.expand(grams);
    const auto rep = find_certificate(c, f, degree);
    if (rep.status() == FeasibilityStatus::Certificate) {
      o.require(verify_certificate(*rep.certificate, c, f), "emitted certificate fails verification");
      ++found;
    } else {
      o.require(rep.status() == FeasibilityStatus::Inconclusive, "planted instance reported infeasible");
      ++inconclusive;
    }
  }
  o.require(found >= 18, std::to_string(found) + "/20 certificates");
  if (o.pass) o.detail = std::to_string(found) + "/20 certificates, " + std::to_string(inconclusive) + " inconclusive";
  return o;
}

Outcome casimir_certificate() {
  Outcome o;
  const auto su2 = make_algebra("su2");
  const auto a = canonical_a(su2);
  const std::vector<Element> f{Element::one(su2)};
  const auto rep = find_certificate(a, f, 2);
  o.require(rep.status() == FeasibilityStatus::Certificate, "no certificate: " + to_string(rep.status()));
  if (rep.certificate) o.require(verify_certificate(*rep.certificate, a, f), "certificate fails verification");
  const auto p = build_gram_problem(a, f, 2);
  o.require(p.blocks().size() == 1 && p.blocks()[0].basis == monomials_up_to(3, 1), "basis is not {1, x1, x2, x3}");
  o.require(p.satisfied_by({CMatrix::identity(4)}), "identity Gram does not satisfy the constraints");
  return o;
}

Outcome interval_positivity() {
  Outcome o;
  const auto su2 = make_algebra("su2");
  const auto h = hamiltonian(su2);
  const auto one = Element::one(su2);
  const auto p = (h - Scalar(Rational(1, 4)) * one) * (h - Scalar(Rational(3, 4)) * one);
  const auto scan = scan_dual_window({one, p}, DualWindow::spins(4));
  std::string failing;
  for (const auto& l : scan.window)
    if (!scan.is_member(l)) failing += (failing.empty() ? "" : ",") + l;
  o.require(failing.empty(), "window scan negative at l in {" + failing + "} (first witness value " +
                                 (failing.empty() ? "" : q(scan.witnesses.at(failing.substr(0, failing.find(','))).value)) +
                                 ")");
  const auto rep = find_certificate(p, {one}, 2);
  const bool evidence = rep.status() == FeasibilityStatus::InfeasibleEvidence && rep.summary.dual_value &&
                        *rep.summary.dual_value < -1e-3;
  std::ostringstream dual;
  dual << "degree-2 search: " << to_string(rep.status());
  if (rep.summary.dual_value) dual << ", dual " << *rep.summary.dual_value;
  o.require(evidence, dual.str());
  if (o.pass) o.detail = dual.str();
  else if (evidence) o.detail += "; " + dual.str() + " (evidence only)";
  return o;
}

Outcome motzkin() {
  Outcome o;
  const auto m = parse_commutative("t1^4*t2^2 + t1^2*t2^4 - 3*t1^2*t2^2*t3^2 + t3^6", 3);
  const auto r0 = commutative_sos(m, 0);
  o.require(r0.verdict == CommutativeVerdict::InfeasibleEvidence && r0.summary.dual_value &&
                *r0.summary.dual_value < 0,
            "level 0: " + to_string(r0.verdict));
  const auto r1 = commutative_sos(m, 1);
  o.require(r1.verdict == CommutativeVerdict::Certificate && r1.certificate, "level 1: " + to_string(r1.verdict));
  if (r1.certificate) {
    o.require(verify_commutative_certificate(*r1.certificate, m), "level 1 certificate fails verification");
    const auto back = CommutativeCertificate::from_json(nlohmann::json::parse(r1.certificate->to_json().dump()));
    o.require(back.target() == CommutativePoly::sphere_power(3, 1) * m, "re-expansion differs from (sum t^2) * p");
    o.require(back.to_json() == r1.certificate->to_json(), "JSON round trip differs");
  }
  return o;
}

Outcome theorem_end_to_end() {
  Outcome o;
  const auto su2 = make_algebra("su2");
  TheoremInstance inst(canonical_a(su2).pow(2));
  inst.f = {Element::one(su2)};
  inst.epsilon = 1;
  inst.caps.n_max = 2;
  inst.caps.d_max = 8;
  inst.window = default_window(su2);
  const auto tr = search_certificate(inst);
  o.require(tr.assumption_ii.kind == SymbolVerdict::Kind::CertifiedPositive && tr.assumption_ii.level == 0u,
            "symbol not certified at level 0");
  o.require(tr.assumption_ii.symbol == CommutativePoly::sphere_power(3, 2), "symbol != (sum t^2)^2");
  o.require(tr.outcome == SearchTranscript::Outcome::Found && tr.n == 0u, "no certificate at n = 0");
  if (tr.certificate) o.require(verify_certificate(*tr.certificate, inst.c, inst.f), "certificate fails verification");
  o.require(tr.to_json().dump() == search_certificate(inst).to_json().dump(), "transcripts differ between runs");
  return o;
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "PBW ring axioms on random triples", 60, ring_axioms},
      {2, "involution laws on random pairs", 30, involution_laws},
      {3, "a equals the square sum 1 - sum x_k^2", 60, casimir_as_square_sum},
      {4, "spin representations: dU_l(a) and the H spectrum", 10, spin_representations},
      {5, "centrality of a", 60, centrality},
      {6, "cleared commutator identity", 60, cleared_identity},
      {7, "operator relations in spin and point contexts", 60, operator_relations},
      {8, "planted weighted-SOS instances round trip", 600, planted_roundtrip},
      {9, "a as a degree-2 certificate", 60, casimir_certificate},
      {10, "(H - 1/4)(H - 3/4): window positivity and degree-2 search", 60, interval_positivity},
      {11, "Motzkin form in commutative mode", 120, motzkin},
      {12, "end-to-end Positivstellensatz search for a^2", 120, theorem_end_to_end},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (secs > c.budget_seconds) o.require(false, "over time budget");
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << secs << "s";
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " [" << time.str() << "]"
              << (o.detail.empty() ? "" : " -- " + o.detail) << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
