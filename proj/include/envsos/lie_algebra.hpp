#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "envsos/scalar.hpp"

namespace envsos {

/// Raw, unvalidated Lie algebra data: a fixed ordered basis and dense
/// structure constants. Indices are 0-based; `c(i, j, k)` is the coefficient
/// of x_k in [x_i, x_j]. The basis order is the PBW order everywhere.
struct LieAlgebraSpec {
  std::string label;
  std::vector<std::string> names;
  std::vector<Rational> constants;  // size dim^3, index (i*dim + j)*dim + k

  static LieAlgebraSpec zero(std::string label, std::size_t dim);

  std::size_t dim() const { return names.size(); }
  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const {
    return constants[(i * dim() + j) * dim() + k];
  }
  Rational& c(std::size_t i, std::size_t j, std::size_t k) {
    return constants[(i * dim() + j) * dim() + k];
  }
  /// Sets c(i,j,k) = v and c(j,i,k) = -v.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const Rational& v);
};

/// A sparse term of a bracket: coefficient times x_k.
struct BracketTerm {
  std::size_t k;
  Rational coeff;
};

/// Validated, immutable Lie algebra.
class LieAlgebra {
 public:
  std::size_t dim() const { return spec_.dim(); }
  const std::string& label() const { return spec_.label; }
  const std::vector<std::string>& names() const { return spec_.names; }
  const LieAlgebraSpec& spec() const { return spec_; }
  const Rational& c(std::size_t i, std::size_t j, std::size_t k) const { return spec_.c(i, j, k); }
  /// Nonzero terms of [x_i, x_j].
  const std::vector<BracketTerm>& bracket(std::size_t i, std::size_t j) const {
    return sparse_[i * dim() + j];
  }
  bool is_abelian() const;

 private:
  friend LieAlgebra validate(LieAlgebraSpec spec);
  explicit LieAlgebra(LieAlgebraSpec spec);

  LieAlgebraSpec spec_;
  std::vector<std::vector<BracketTerm>> sparse_;
};

/// Checks antisymmetry and the Jacobi identity exactly. Throws
/// AntisymmetryViolation or JacobiViolation naming the first failing indices
/// (reported 1-based, matching the x1..xd naming).
LieAlgebra validate(LieAlgebraSpec spec);

/// Jacobi sum for fixed (i,j,k,l), 0-based; zero for a Lie algebra.
Rational jacobi_residual(const LieAlgebraSpec& spec, std::size_t i, std::size_t j, std::size_t k,
                         std::size_t l);

/// Builtin catalog: "su2", "heisenberg3", "affine_line", "sl2r", and
/// "abelian(d)" (also accepted as "abelianD"). Throws UnknownAlgebra.
LieAlgebraSpec builtin_spec(std::string_view name);
inline LieAlgebra builtin(std::string_view name) { return validate(builtin_spec(name)); }

/// b^k_{ij} = c^k_{ij} + c^j_{ik}.
class BConstants {
 public:
  explicit BConstants(const LieAlgebra& lie);
  const Rational& b(std::size_t i, std::size_t j, std::size_t k) const {
    return values_[(i * dim_ + j) * dim_ + k];
  }
  bool is_zero() const;

 private:
  std::size_t dim_;
  std::vector<Rational> values_;
};

inline BConstants b_constants(const LieAlgebra& lie) { return BConstants(lie); }

/// JSON algebra spec. Accepts either {"builtin": name} or the explicit form
/// {"dim", "names", "brackets": [{"i","j","terms":[{"k","coeff"}]}]} with
/// 1-based indices; unlisted brackets are zero and each listed bracket is
/// completed antisymmetrically unless its mirror is listed too.
LieAlgebraSpec lie_spec_from_json(const nlohmann::json& j);
nlohmann::json lie_to_json(const LieAlgebra& lie);

}  // namespace envsos
