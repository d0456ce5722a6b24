#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "envsos/exact_matrix.hpp"
#include "envsos/lie_algebra.hpp"
#include "envsos/pbw.hpp"
#include "envsos/representation.hpp"

namespace envsos {

// ---------------------------------------------------------------------------
// Identities with Y = a^{-1} cleared by multiplying with a on both sides.

struct ClearedIdentityEntry {
  std::vector<std::size_t> indices;  // 1-based (k) or (k, l)
  Element lhs;                       // [x_k, a] or [x_k x_l, a]
  Element rhs;                       // rederived right-hand side
  Element residual;                  // lhs - rhs
  Element printed_rhs;               // printed form, summation index repaired
  Element printed_residual;          // lhs - printed_rhs
};

struct ClearedIdentityReport {
  std::string identity;  // "commutator" or "degree2"
  std::string algebra;
  std::vector<ClearedIdentityEntry> entries;

  bool pass() const;               // every rederived residual is zero
  bool printed_form_matches() const;
  nlohmann::json to_json() const;
};

/// x_k a - a x_k = sum_{i,j} c^j_{ik} (x_i x_j + x_j x_i) for every k. The
/// right-hand side uses `claimed` structure constants (normally the algebra's
/// own), so tampered constants surface as nonzero residuals.
ClearedIdentityReport audit_cleared_commutator(const AlgebraPtr& alg, const LieAlgebraSpec& claimed);
inline ClearedIdentityReport audit_cleared_commutator(const AlgebraPtr& alg) {
  return audit_cleared_commutator(alg, alg->lie().spec());
}

/// x_k x_l a - a x_k x_l = -sum_{i,j} (b^j_{li} x_k x_i x_j + b^j_{ki} x_i x_j x_l)
/// with b^k_{ij} = c^k_{ij} + c^j_{ik}, for every (k, l).
ClearedIdentityReport audit_cleared_degree2(const AlgebraPtr& alg, const LieAlgebraSpec& claimed);
inline ClearedIdentityReport audit_cleared_degree2(const AlgebraPtr& alg) {
  return audit_cleared_degree2(alg, alg->lie().spec());
}

// ---------------------------------------------------------------------------
// Operator identities in a finite-dimensional representation.

/// X_k = dU(x_k), X_0 = i*I, A = dU(a), Y = A^{-1} exactly, and
/// Y_{kl} = X_k X_l Y, Y_{-l,-k} = Y X_l X_k for k, l in 0..d.
class OperatorAlgebraContext {
 public:
  /// Throws ContextInvalid if A is singular or Y_{kl}^* != Y_{-l,-k}.
  explicit OperatorAlgebraContext(FiniteDimRep rep);

  const FiniteDimRep& rep() const { return rep_; }
  std::size_t d() const { return rep_.algebra()->dim(); }
  std::size_t size() const { return rep_.size(); }
  const CMatrix& x(std::size_t k) const { return x_[k]; }  // k in 0..d
  const CMatrix& a() const { return a_; }
  const CMatrix& y() const { return y_; }
  /// Y_{kl}, k, l in 0..d.
  const CMatrix& y_kl(std::size_t k, std::size_t l) const { return ykl_[k * (d() + 1) + l]; }
  /// Y_{-l,-k} = Y X_l X_k, k, l in 0..d.
  const CMatrix& y_neg(std::size_t l, std::size_t k) const { return yneg_[l * (d() + 1) + k]; }
  CMatrix adjoint(const CMatrix& m) const { return rep_.adjoint(m); }

 private:
  FiniteDimRep rep_;
  std::vector<CMatrix> x_;
  CMatrix a_, y_;
  std::vector<CMatrix> ykl_, yneg_;
};

/// "spins=1/2,1" (su2 direct sum) or "point=1,-2" (abelian point).
FiniteDimRep parse_context(const AlgebraPtr& alg, const std::string& spec);

struct RelationAudit {
  std::string id;  // "yadj", "r1", ..., "r8"
  bool pass = true;
  std::size_t checks = 0;
  std::string residual;  // "0" or the first failing residual
  std::string note;
};

struct RelationsReport {
  std::string context;
  std::size_t ideal_rank = 0;  // dimension of the degree-bounded ideal span
  std::size_t ambient = 0;     // N^2
  std::vector<RelationAudit> relations;

  bool pass() const;
  const RelationAudit& at(const std::string& id) const;
  nlohmann::json to_json() const;
};

/// (r1)-(r4) as exact matrix equalities; (r5)-(r8) as membership in the span
/// of u Y_{k0} v, k = -d..d, with u, v products of at most `ideal_level`
/// generators Y_{kl}, Y_{-l,-k}.
RelationsReport audit_r_relations(const OperatorAlgebraContext& ctx, unsigned ideal_level = 1);

}  // namespace envsos
