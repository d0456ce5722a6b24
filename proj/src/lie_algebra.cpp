#include "envsos/lie_algebra.hpp"

#include <cctype>
#include <set>
#include <utility>

#include "envsos/errors.hpp"

namespace envsos {

namespace {

std::vector<std::string> default_names(std::size_t dim) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

std::string idx(std::size_t i) { return std::to_string(i + 1); }

}  // namespace

LieAlgebraSpec LieAlgebraSpec::zero(std::string label, std::size_t dim) {
  LieAlgebraSpec s;
  s.label = std::move(label);
  s.names = default_names(dim);
  s.constants.assign(dim * dim * dim, Rational(0));
  return s;
}

void LieAlgebraSpec::set_bracket(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
  c(i, j, k) = v;
  c(j, i, k) = -v;
}

LieAlgebra::LieAlgebra(LieAlgebraSpec spec) : spec_(std::move(spec)) {
  const std::size_t d = dim();
  sparse_.resize(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (sgn(c(i, j, k)) != 0) sparse_[i * d + j].push_back({k, c(i, j, k)});
}

bool LieAlgebra::is_abelian() const {
  for (const auto& q : spec_.constants)
    if (sgn(q) != 0) return false;
  return true;
}

Rational jacobi_residual(const LieAlgebraSpec& s, std::size_t i, std::size_t j, std::size_t k,
                         std::size_t l) {
  Rational sum = 0;
  for (std::size_t m = 0; m < s.dim(); ++m)
    sum += s.c(i, j, m) * s.c(m, k, l) + s.c(j, k, m) * s.c(m, i, l) + s.c(k, i, m) * s.c(m, j, l);
  return sum;
}

LieAlgebra validate(LieAlgebraSpec spec) {
  const std::size_t d = spec.dim();
  if (d == 0) throw InvalidInstance("Lie algebra dimension must be at least 1");
  if (spec.constants.size() != d * d * d)
    throw InvalidInstance("structure constant tensor has wrong size");
  std::set<std::string> seen;
  for (const auto& n : spec.names)
    if (n.empty() || !seen.insert(n).second) throw InvalidInstance("basis names must be distinct and nonempty");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        if (spec.c(i, j, k) != -spec.c(j, i, k))
          throw AntisymmetryViolation("c^" + idx(k) + "_{" + idx(i) + idx(j) + "} != -c^" + idx(k) + "_{" +
                                      idx(j) + idx(i) + "} (i=" + idx(i) + ", j=" + idx(j) + ", k=" + idx(k) + ")");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) {
          Rational r = jacobi_residual(spec, i, j, k, l);
          if (sgn(r) != 0)
            throw JacobiViolation("(i,j,k,l)=(" + idx(i) + "," + idx(j) + "," + idx(k) + "," + idx(l) +
                                  ") residual " + rational_to_json(r));
        }
  return LieAlgebra(std::move(spec));
}

LieAlgebraSpec builtin_spec(std::string_view name) {
  const std::string n(name);
  if (n == "su2") {
    auto s = LieAlgebraSpec::zero("su2", 3);
    s.set_bracket(0, 1, 2, 1);  // [x1,x2] = x3
    s.set_bracket(1, 2, 0, 1);  // [x2,x3] = x1
    s.set_bracket(2, 0, 1, 1);  // [x3,x1] = x2
    return s;
  }
  if (n == "heisenberg3") {
    auto s = LieAlgebraSpec::zero("heisenberg3", 3);
    s.set_bracket(0, 1, 2, 1);
    return s;
  }
  if (n == "affine_line") {
    auto s = LieAlgebraSpec::zero("affine_line", 2);
    s.set_bracket(0, 1, 1, 1);  // [x1,x2] = x2
    return s;
  }
  if (n == "sl2r") {
    // x1 = h, x2 = e, x3 = f
    auto s = LieAlgebraSpec::zero("sl2r", 3);
    s.set_bracket(0, 1, 1, 2);
    s.set_bracket(0, 2, 2, -2);
    s.set_bracket(1, 2, 0, 1);
    return s;
  }
  std::string digits;
  if (n.rfind("abelian(", 0) == 0 && n.size() > 9 && n.back() == ')')
    digits = n.substr(8, n.size() - 9);
  else if (n.rfind("abelian", 0) == 0)
    digits = n.substr(7);
  if (!digits.empty() && digits.size() < 4) {
    bool ok = true;
    for (char ch : digits) ok = ok && std::isdigit(static_cast<unsigned char>(ch));
    if (ok && std::stoi(digits) >= 1) return LieAlgebraSpec::zero("abelian(" + digits + ")", std::stoul(digits));
  }
  throw UnknownAlgebra("no builtin algebra named '" + n + "'");
}

BConstants::BConstants(const LieAlgebra& lie) : dim_(lie.dim()), values_(dim_ * dim_ * dim_) {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      for (std::size_t k = 0; k < dim_; ++k)
        values_[(i * dim_ + j) * dim_ + k] = lie.c(i, j, k) + lie.c(i, k, j);
}

bool BConstants::is_zero() const {
  for (const auto& q : values_)
    if (sgn(q) != 0) return false;
  return true;
}

LieAlgebraSpec lie_spec_from_json(const nlohmann::json& j) {
  try {
    if (j.is_string()) return builtin_spec(j.get<std::string>());
    if (j.contains("builtin")) return builtin_spec(j.at("builtin").get<std::string>());
    const auto d = j.at("dim").get<std::size_t>();
    if (d == 0) throw InvalidInstance("dim must be positive");
    auto s = LieAlgebraSpec::zero(j.value("label", std::string("custom")), d);
    if (j.contains("names")) {
      s.names = j.at("names").get<std::vector<std::string>>();
      if (s.names.size() != d) throw InvalidInstance("names must list dim identifiers");
    }
    std::set<std::pair<std::size_t, std::size_t>> listed;
    for (const auto& br : j.value("brackets", nlohmann::json::array()))
      listed.emplace(br.at("i").get<std::size_t>(), br.at("j").get<std::size_t>());
    for (const auto& br : j.value("brackets", nlohmann::json::array())) {
      const auto i = br.at("i").get<std::size_t>();
      const auto jj = br.at("j").get<std::size_t>();
      if (i < 1 || i > d || jj < 1 || jj > d) throw InvalidInstance("bracket index out of range");
      const bool mirrored = listed.count({jj, i}) > 0 && i != jj;
      for (const auto& t : br.at("terms")) {
        const auto k = t.at("k").get<std::size_t>();
        if (k < 1 || k > d) throw InvalidInstance("bracket term index out of range");
        Rational v = parse_rational(t.at("coeff").get<std::string>());
        s.c(i - 1, jj - 1, k - 1) = v;
        if (!mirrored && i != jj) s.c(jj - 1, i - 1, k - 1) = -v;
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInstance(std::string("malformed algebra JSON: ") + e.what());
  }
}

nlohmann::json lie_to_json(const LieAlgebra& lie) {
  nlohmann::json brackets = nlohmann::json::array();
  for (std::size_t i = 0; i < lie.dim(); ++i)
    for (std::size_t j = i + 1; j < lie.dim(); ++j) {
      if (lie.bracket(i, j).empty()) continue;
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& t : lie.bracket(i, j)) terms.push_back({{"k", t.k + 1}, {"coeff", rational_to_json(t.coeff)}});
      brackets.push_back({{"i", i + 1}, {"j", j + 1}, {"terms", terms}});
    }
  return {{"label", lie.label()}, {"dim", lie.dim()}, {"names", lie.names()}, {"brackets", brackets}};
}

}  // namespace envsos
