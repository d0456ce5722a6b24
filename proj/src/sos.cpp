#include "envsos/sos.hpp"

#include <functional>
#include <map>

#include "envsos/errors.hpp"
#include "envsos/expr.hpp"
#include "gram_system.hpp"

namespace envsos {

namespace {

template <typename T>
nlohmann::json ldl_json(const LdlResult<T>& ldl) {
  nlohmann::json perm = nlohmann::json::array(), pivots = nlohmann::json::array();
  for (auto p : ldl.perm) perm.push_back(p + 1);
  for (const auto& v : ldl.pivots) pivots.push_back(rational_to_json(v));
  return {{"perm", perm}, {"pivots", pivots}};
}

nlohmann::json gram_json(const CMatrix& g) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(g(i, j).to_json());
    rows.push_back(row);
  }
  return rows;
}

template <typename T>
Matrix<T> gram_from_json(const nlohmann::json& rows, const std::function<T(const std::string&)>& parse_entry) {
  const std::size_t n = rows.size();
  Matrix<T> g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ParseError("Gram matrix must be square");
    for (std::size_t j = 0; j < n; ++j) g(i, j) = parse_entry(rows[i][j].get<std::string>());
  }
  return g;
}

// sum_b sum_{p,q} G_b(p,q) u_p^* f_b u_q, computed by plain multiplication.
Element weighted_expansion(const AlgebraPtr& alg, const std::vector<CertificateBlock>& blocks,
                           const std::vector<Element>& f) {
  Element sum(alg);
  for (const auto& blk : blocks) {
    const auto& fl = f.at(blk.generator);
    for (std::size_t p = 0; p < blk.basis.size(); ++p) {
      const Element left = blk.basis[p].involution() * fl;
      for (std::size_t q = 0; q < blk.basis.size(); ++q) {
        const auto& g = blk.gram(p, q);
        if (!is_zero(g)) sum += g * (left * blk.basis[q]);
      }
    }
  }
  return sum;
}

std::vector<CertificateBlock> certificate_blocks(const SdpProblem& p, const std::vector<CMatrix>& grams) {
  std::vector<CertificateBlock> out;
  const auto& alg = p.target().algebra();
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    CertificateBlock blk{p.blocks()[b].generator, {}, grams.at(b)};
    for (const auto& m : p.blocks()[b].basis) blk.basis.push_back(Element::monomial(alg, m));
    out.push_back(std::move(blk));
  }
  return out;
}

std::optional<std::size_t> element_degree_or_none(const Element& e) { return e.degree(); }

}  // namespace

nlohmann::json SolverOptions::to_json() const {
  return {{"tol", tol},       {"dual_tol", dual_tol},           {"max_block", max_block},
          {"max_iterations", max_iterations}, {"margins", margins}, {"rounding_bits", rounding_bits},
          {"seed", seed}};
}

std::string to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::Certificate: return "certificate";
    case FeasibilityStatus::InfeasibleEvidence: return "numeric-infeasible-evidence";
    case FeasibilityStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json SolveSummary::to_json() const {
  nlohmann::json j{{"status", to_string(status)}, {"residual", residual}, {"min_eigenvalue", min_eigenvalue},
                   {"iterations", iterations}, {"note", note}};
  j["dual_value"] = dual_value ? nlohmann::json(*dual_value) : nlohmann::json();
  j["margin"] = margin ? nlohmann::json(*margin) : nlohmann::json();
  j["rounding_bits"] = rounding_bits ? nlohmann::json(*rounding_bits) : nlohmann::json();
  return j;
}

SdpProblem::SdpProblem(Element target, std::vector<Element> generators, unsigned degree)
    : target_(std::move(target)), generators_(std::move(generators)), degree_(degree) {
  const auto& alg = target_.algebra();
  std::vector<std::vector<Element>> products;  // per block, row-major E_pq
  std::map<Monomial, std::size_t, MonomialOrder> index;
  for (const auto& [m, c] : target_.terms()) index.emplace(m, 0);
  for (std::size_t l = 0; l < generators_.size(); ++l) {
    GramBlock blk{l, {}};
    const auto dl = generators_[l].degree();
    if (dl && *dl <= degree_) blk.basis = monomials_up_to(alg->dim(), (degree_ - *dl) / 2);
    std::vector<Element> prods;
    std::vector<Element> basis;
    for (const auto& m : blk.basis) basis.push_back(Element::monomial(alg, m));
    for (const auto& wp : basis) {
      const Element left = wp.involution() * generators_[l];
      for (const auto& wq : basis) {
        prods.push_back(left * wq);
        for (const auto& [m, c] : prods.back().terms()) index.emplace(m, 0);
      }
    }
    blocks_.push_back(std::move(blk));
    products.push_back(std::move(prods));
  }
  for (auto& [m, idx] : index) {
    idx = monomials_.size();
    monomials_.push_back(m);
  }
  detail::GramInput in;
  in.hermitian = true;
  in.target.assign(monomials_.size(), Scalar(0));
  for (const auto& [m, c] : target_.terms()) in.target[index.at(m)] = c;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    in.sizes.push_back(blocks_[b].basis.size());
    std::vector<detail::SparseRow> entries;
    for (const auto& e : products[b]) {
      detail::SparseRow row;
      for (const auto& [m, c] : e.terms()) row[index.at(m)] = c;
      entries.push_back(std::move(row));
    }
    in.entries.push_back(std::move(entries));
  }
  system_ = std::make_shared<const detail::GramSystem>(std::move(in));
}

Element SdpProblem::expand(const std::vector<CMatrix>& grams) const {
  return weighted_expansion(target_.algebra(), certificate_blocks(*this, grams), generators_);
}

SdpProblem build_gram_problem(const Element& c, const std::vector<Element>& f, unsigned degree) {
  if (degree % 2 != 0) throw OddDegreeTarget("the degree bound D must be even, got " + std::to_string(degree));
  for (const auto& g : f)
    if (!g.algebra()->same_as(*c.algebra())) throw AlgebraMismatch("generators and target differ in algebra");
  if (f.empty() || f.front() != Element::one(c.algebra()))
    throw InvalidInstance("the first generator must be the unit 1");
  for (const auto& g : f)
    if (!g.is_hermitean()) throw NotHermitean("generator '" + render(g) + "' is not hermitean");
  if (!c.is_hermitean()) throw NotHermitean("target '" + render(c) + "' is not hermitean");
  const auto dc = element_degree_or_none(c);
  if (dc && *dc > degree)
    throw DegreeMismatch("target degree " + std::to_string(*dc) + " exceeds D = " + std::to_string(degree));
  return SdpProblem(c, f, degree);
}

nlohmann::json WeightedSosCertificate::to_json() const {
  nlohmann::json gens = nlohmann::json::array(), blks = nlohmann::json::array();
  for (const auto& g : generators) gens.push_back(render(g));
  for (const auto& b : blocks) {
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& e : b.basis) basis.push_back(render(e));
    blks.push_back({{"l", b.generator + 1},
                    {"basis", basis},
                    {"gram", gram_json(b.gram)},
                    {"ldl_witness", ldl_json(hermitian_ldl(b.gram))}});
  }
  return {{"schema_version", 1},
          {"mode", "weighted"},
          {"algebra", lie_to_json(target.algebra()->lie())},
          {"degree", degree},
          {"generators", gens},
          {"target", render(target)},
          {"blocks", blks}};
}

WeightedSosCertificate WeightedSosCertificate::from_json(const nlohmann::json& j) {
  try {
    if (j.value("mode", std::string("weighted")) != "weighted") throw ParseError("not a weighted certificate");
    const auto alg = make_algebra(validate(lie_spec_from_json(j.at("algebra"))));
    std::vector<Element> gens;
    for (const auto& g : j.at("generators")) gens.push_back(parse(g.get<std::string>(), alg));
    WeightedSosCertificate cert{j.at("degree").get<unsigned>(), parse(j.at("target").get<std::string>(), alg),
                                std::move(gens), {}};
    for (const auto& b : j.at("blocks")) {
      const auto l = b.at("l").get<std::size_t>();
      if (l < 1 || l > cert.generators.size()) throw ParseError("block generator index out of range");
      CertificateBlock blk{l - 1, {}, CMatrix()};
      for (const auto& e : b.at("basis")) blk.basis.push_back(parse(e.get<std::string>(), alg));
      blk.gram = gram_from_json<Scalar>(b.at("gram"), [](const std::string& s) { return Scalar::from_json(s); });
      cert.blocks.push_back(std::move(blk));
    }
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate JSON: ") + e.what());
  }
}

bool verify_certificate(const WeightedSosCertificate& cert, const Element& c, const std::vector<Element>& f) {
  try {
    if (!cert.target.algebra()->same_as(*c.algebra()) || cert.target != c) return false;
    if (cert.generators.size() != f.size()) return false;
    for (std::size_t l = 0; l < f.size(); ++l)
      if (!cert.generators[l].algebra()->same_as(*c.algebra()) || cert.generators[l] != f[l]) return false;
    for (const auto& b : cert.blocks) {
      if (b.generator >= f.size()) return false;
      if (b.gram.rows() != b.basis.size() || b.gram.cols() != b.basis.size()) return false;
      if (!is_hermitian(b.gram) || !hermitian_ldl(b.gram).psd) return false;
      for (const auto& e : b.basis)
        if (!e.algebra()->same_as(*c.algebra())) return false;
    }
    return weighted_expansion(c.algebra(), cert.blocks, f) == c;
  } catch (const std::exception&) {
    return false;
  }
}

NumericSolution solve_feasibility(const SdpProblem& p, const SolverOptions& opts) {
  auto search = detail::numeric_search(p.system(), opts);
  return NumericSolution{search.candidate, std::move(search.point), std::move(search.summary)};
}

std::optional<WeightedSosCertificate> round_and_verify(const NumericSolution& sol, const SdpProblem& p,
                                                       const SolverOptions& opts) {
  if (!sol.candidate) return std::nullopt;
  std::optional<WeightedSosCertificate> cert;
  auto accept = [&](const std::vector<CMatrix>& grams) {
    WeightedSosCertificate c{p.degree(), p.target(), p.generators(), certificate_blocks(p, grams)};
    if (!verify_certificate(c, p.target(), p.generators())) return false;
    cert = std::move(c);
    return true;
  };
  detail::round_candidate(p.system(), sol.point, opts, accept);
  return cert;
}

nlohmann::json FeasibilityReport::to_json() const {
  nlohmann::json j = summary.to_json();
  j["certificate"] = certificate ? certificate->to_json() : nlohmann::json();
  return j;
}

FeasibilityReport find_certificate(const SdpProblem& p, const SolverOptions& opts) {
  FeasibilityReport report;
  auto accept = [&](const std::vector<CMatrix>& grams) {
    WeightedSosCertificate c{p.degree(), p.target(), p.generators(), certificate_blocks(p, grams)};
    if (!verify_certificate(c, p.target(), p.generators())) return false;
    report.certificate = std::move(c);
    return true;
  };
  auto res = detail::run_pipeline(p.system(), opts, accept);
  report.summary = res.summary;
  if (report.summary.status != FeasibilityStatus::Certificate) report.certificate.reset();
  return report;
}

// ---------------------------------------------------------------------------
// Commutative mode

namespace {

AlgebraPtr t_algebra(std::size_t nvars) {
  auto spec = LieAlgebraSpec::zero("t", nvars);
  for (std::size_t j = 0; j < nvars; ++j) spec.names[j] = "t" + std::to_string(j + 1);
  return make_algebra(validate(spec));
}

QMatrix real_part(const CMatrix& g) {
  QMatrix out(g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out(i, j) = g(i, j).re();
  return out;
}

void for_each_grid_point(std::size_t nvars, int radius, const std::function<bool(const std::vector<Rational>&)>& fn) {
  std::vector<int> idx(nvars, -radius);
  for (;;) {
    std::vector<Rational> t(idx.begin(), idx.end());
    if (!fn(t)) return;
    std::size_t k = 0;
    while (k < nvars && idx[k] == radius) idx[k++] = -radius;
    if (k == nvars) return;
    ++idx[k];
  }
}

}  // namespace

CommutativePoly parse_commutative(const std::string& text, std::size_t nvars) {
  const auto e = parse(text, t_algebra(nvars));
  CommutativePoly p(nvars);
  for (const auto& [m, c] : e.terms()) {
    if (!c.is_real()) throw ParseError("commutative polynomials have real coefficients: '" + text + "'");
    p.add_term(m, c.re());
  }
  return p;
}

std::optional<std::vector<Rational>> sample_negative(const CommutativePoly& p, int radius) {
  std::optional<std::vector<Rational>> found;
  for_each_grid_point(p.nvars(), radius, [&](const std::vector<Rational>& t) {
    if (sgn(p.evaluate(t)) < 0) {
      found = t;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<std::vector<Rational>> sample_zeros(const CommutativePoly& p, int radius) {
  std::vector<std::vector<Rational>> zeros;
  for_each_grid_point(p.nvars(), radius, [&](const std::vector<Rational>& t) {
    bool origin = true;
    for (const auto& v : t) origin = origin && sgn(v) == 0;
    if (!origin && sgn(p.evaluate(t)) == 0) zeros.push_back(t);
    return true;
  });
  return zeros;
}

CommutativePoly CommutativeCertificate::target() const {
  return CommutativePoly::sphere_power(polynomial.nvars(), level) * polynomial;
}

nlohmann::json CommutativeCertificate::to_json() const {
  nlohmann::json basis_j = nlohmann::json::array(), rows = nlohmann::json::array();
  for (const auto& u : basis) basis_j.push_back(u.to_string());
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < gram.cols(); ++j) row.push_back(rational_to_json(gram(i, j)));
    rows.push_back(row);
  }
  return {{"schema_version", 1},
          {"mode", "commutative"},
          {"nvars", polynomial.nvars()},
          {"level", level},
          {"polynomial", polynomial.to_string()},
          {"target", target().to_string()},
          {"basis", basis_j},
          {"gram", rows},
          {"ldl_witness", ldl_json(hermitian_ldl(gram))}};
}

CommutativeCertificate CommutativeCertificate::from_json(const nlohmann::json& j) {
  try {
    if (j.at("mode").get<std::string>() != "commutative") throw ParseError("not a commutative certificate");
    const auto n = j.at("nvars").get<std::size_t>();
    CommutativeCertificate cert{parse_commutative(j.at("polynomial").get<std::string>(), n),
                                j.at("level").get<unsigned>(), {}, QMatrix()};
    for (const auto& u : j.at("basis")) cert.basis.push_back(parse_commutative(u.get<std::string>(), n));
    cert.gram = gram_from_json<Rational>(j.at("gram"), [](const std::string& s) { return parse_rational(s); });
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed certificate JSON: ") + e.what());
  }
}

bool verify_commutative_certificate(const CommutativeCertificate& cert, const CommutativePoly& p) {
  if (!(cert.polynomial == p)) return false;
  const std::size_t n = cert.basis.size();
  if (cert.gram.rows() != n || cert.gram.cols() != n) return false;
  if (!is_hermitian(cert.gram) || !hermitian_ldl(cert.gram).psd) return false;
  CommutativePoly sum(p.nvars());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(cert.gram(i, j)) != 0) sum += cert.gram(i, j) * (cert.basis[i] * cert.basis[j]);
  return sum == cert.target();
}

std::string to_string(CommutativeVerdict v) {
  switch (v) {
    case CommutativeVerdict::Certificate: return "certificate";
    case CommutativeVerdict::NotPositive: return "not-positive";
    case CommutativeVerdict::InfeasibleEvidence: return "numeric-infeasible-evidence";
    case CommutativeVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

nlohmann::json CommutativeReport::to_json() const {
  nlohmann::json j{{"verdict", to_string(verdict)}, {"level", level}, {"solver", summary.to_json()}};
  j["certificate"] = certificate ? certificate->to_json() : nlohmann::json();
  if (negative_point) {
    nlohmann::json pt = nlohmann::json::array();
    for (const auto& v : *negative_point) pt.push_back(rational_to_json(v));
    j["negative_point"] = pt;
  } else {
    j["negative_point"] = nullptr;
  }
  j["sampled_zeros"] = zeros.size();
  return j;
}

CommutativeReport commutative_sos(const CommutativePoly& p, unsigned level, const SolverOptions& opts) {
  if (p.is_zero() || !p.is_homogeneous()) throw NotHomogeneous("'" + p.to_string() + "' is not a nonzero form");
  const unsigned deg = *p.degree();
  if (deg % 2 != 0) throw OddDegreeTarget("forms of odd degree are never positive on the sphere");
  const std::size_t d = p.nvars();
  CommutativeReport report;
  report.level = level;
  report.negative_point = sample_negative(p);
  if (report.negative_point) {
    report.verdict = CommutativeVerdict::NotPositive;
    report.summary.note = "negative value at a sampled grid point; no certificate attempted";
    return report;
  }
  report.zeros = sample_zeros(p);
  const CommutativePoly q = CommutativePoly::sphere_power(d, level) * p;
  const unsigned half = (deg + 2 * level) / 2;

  std::map<Monomial, std::size_t, MonomialOrder> index;
  for (const auto& m : monomials_of_degree(d, 2 * half)) index.emplace(m, index.size());
  std::vector<Scalar> target(index.size(), Scalar(0));
  for (const auto& [m, c] : q.terms()) target[index.at(m)] = Scalar(c);

  auto gram_input = [&](const std::vector<CommutativePoly>& basis) {
    detail::GramInput in;
    in.hermitian = false;
    in.target = target;
    in.sizes = {basis.size()};
    std::vector<detail::SparseRow> entries;
    for (const auto& u : basis)
      for (const auto& v : basis) {
        detail::SparseRow row;
        const auto uv = u * v;
        for (const auto& [m, c] : uv.terms()) row[index.at(m)] = Scalar(c);
        entries.push_back(std::move(row));
      }
    in.entries = {std::move(entries)};
    return in;
  };

  // Monomial basis, pruned of entries whose diagonal is forced to vanish.
  std::vector<CommutativePoly> monos;
  const auto all = monomials_of_degree(d, half);
  for (const auto& m : all) {
    CommutativePoly u(d);
    u.add_term(m, 1);
    monos.push_back(std::move(u));
  }
  const auto pre = detail::presolve(gram_input(monos));
  if (pre.infeasible) {
    report.verdict = CommutativeVerdict::InfeasibleEvidence;
    report.summary.status = FeasibilityStatus::InfeasibleEvidence;
    report.summary.dual_value = pre.dual_value;
    report.summary.note = "exact: " + pre.reason;
    return report;
  }
  const auto& active = pre.active.front();

  // Facial reduction: G v(t0) = 0 at every zero t0 of p.
  const std::size_t na = active.size();
  QMatrix vz(report.zeros.size(), na);
  for (std::size_t z = 0; z < report.zeros.size(); ++z)
    for (std::size_t i = 0; i < na; ++i) vz(z, i) = monos[active[i]].evaluate(report.zeros[z]);
  QMatrix basis_cols = report.zeros.empty() ? QMatrix::identity(na) : nullspace(vz);
  std::vector<CommutativePoly> basis;
  for (std::size_t c = 0; c < basis_cols.cols(); ++c) {
    CommutativePoly u(d);
    for (std::size_t i = 0; i < na; ++i)
      if (sgn(basis_cols(i, c)) != 0) u += basis_cols(i, c) * monos[active[i]];
    basis.push_back(std::move(u));
  }

  const detail::GramSystem sys(gram_input(basis));
  auto accept = [&](const std::vector<CMatrix>& grams) {
    CommutativeCertificate cert{p, level, basis, real_part(grams.front())};
    if (!verify_commutative_certificate(cert, p)) return false;
    report.certificate = std::move(cert);
    return true;
  };
  auto res = detail::run_pipeline(sys, opts, accept);
  report.summary = res.summary;
  switch (res.summary.status) {
    case FeasibilityStatus::Certificate: report.verdict = CommutativeVerdict::Certificate; break;
    case FeasibilityStatus::InfeasibleEvidence: report.verdict = CommutativeVerdict::InfeasibleEvidence; break;
    case FeasibilityStatus::Inconclusive: report.verdict = CommutativeVerdict::Inconclusive; break;
  }
  if (report.verdict != CommutativeVerdict::Certificate) report.certificate.reset();
  return report;
}

}  // namespace envsos
