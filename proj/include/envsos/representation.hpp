#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "envsos/exact_matrix.hpp"
#include "envsos/pbw.hpp"

namespace envsos {

/// Exact finite-dimensional *-representation. The inner product is
/// <phi, psi> = sum_n metric[n] phi_n conj(psi_n); every basis element must
/// act skew-adjointly with respect to it and the brackets must be respected.
class FiniteDimRep {
 public:
  /// Validates both invariants; throws InvalidRepresentation.
  FiniteDimRep(AlgebraPtr alg, std::vector<CMatrix> mats, std::vector<Rational> metric, std::string label);

  const AlgebraPtr& algebra() const { return alg_; }
  std::size_t size() const { return metric_.size(); }
  const std::vector<CMatrix>& mats() const { return mats_; }
  const std::vector<Rational>& metric() const { return metric_; }
  const std::string& label() const { return label_; }

  /// S * m, the Gram form of an operator in this inner product.
  CMatrix weighted(const CMatrix& m) const;
  /// Adjoint in the metric: S^{-1} m^H S.
  CMatrix adjoint(const CMatrix& m) const;

 private:
  AlgebraPtr alg_;
  std::vector<CMatrix> mats_;
  std::vector<Rational> metric_;
  std::string label_;
};

/// Spin-l representation of su(2) (l a nonnegative half-integer) in the
/// rational weight basis v_{-l}, ..., v_l. x1 acts diagonally as -i*m on
/// v_m, so H = -i x1 is diagonal; the metric makes the raising and lowering
/// operators mutually adjoint.
FiniteDimRep make_spin_rep(const AlgebraPtr& su2, const Rational& spin);
/// One-dimensional representation x_j -> i*t_j of an abelian algebra.
FiniteDimRep make_point_rep(const AlgebraPtr& abelian, const std::vector<Rational>& t);
FiniteDimRep direct_sum(const FiniteDimRep& a, const FiniteDimRep& b);

CMatrix evaluate(const FiniteDimRep& rep, const Element& e);

struct PositivityVerdict {
  bool positive = false;
  std::vector<Scalar> witness;  // empty when positive
  Rational witness_value{0};    // <dU(e) phi, phi> < 0
};

/// Decides dU(e) >= 0 exactly. Throws NotHermitean.
PositivityVerdict is_positive(const FiniteDimRep& rep, const Element& e);

/// A finite window of the unitary dual: spins 0, 1/2, ..., lmax for su(2),
/// or a list of rational points for an abelian algebra.
struct DualWindow {
  std::optional<Rational> lmax;
  std::vector<std::vector<Rational>> points;

  static DualWindow spins(Rational lmax) { return DualWindow{std::move(lmax), {}}; }
  static DualWindow grid(std::vector<std::vector<Rational>> pts) { return DualWindow{std::nullopt, std::move(pts)}; }
};

struct DualLabel {
  std::string name;  // "1/2", or "(1,2)" for points
  FiniteDimRep rep;
};

/// Enumerates the window's irreducible representations in label order.
/// Throws InvalidInstance if the window does not fit the algebra.
std::vector<DualLabel> window_representations(const AlgebraPtr& alg, const DualWindow& window);

struct WindowWitness {
  std::size_t generator;  // 0-based index into f
  std::vector<Scalar> vector;
  Rational value;
};

struct DualWindowResult {
  std::vector<std::string> window;
  std::vector<std::string> members;
  std::map<std::string, WindowWitness> witnesses;  // first failing generator per label

  bool is_member(const std::string& label) const;
  nlohmann::json to_json() const;
};

/// K_f restricted to the window. f[0] must be the unit; all f hermitean.
DualWindowResult scan_dual_window(const std::vector<Element>& f, const DualWindow& window);

nlohmann::json rep_to_json(const FiniteDimRep& rep);

}  // namespace envsos
