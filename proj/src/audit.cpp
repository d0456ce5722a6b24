#include "envsos/audit.hpp"

#include "envsos/errors.hpp"

namespace envsos {

namespace {

using nlohmann::json;

/// b^k_{ij} = c^k_{ij} + c^j_{ik}, 0-based.
Rational b_of(const LieAlgebraSpec& s, std::size_t i, std::size_t j, std::size_t k) { return s.c(i, j, k) + s.c(i, k, j); }

Element word(const AlgebraPtr& alg, std::initializer_list<std::size_t> letters) {
  std::vector<unsigned> w;
  for (auto l : letters) w.push_back(static_cast<unsigned>(l));
  return Element::word(alg, w);
}

void check_claimed(const AlgebraPtr& alg, const LieAlgebraSpec& claimed) {
  if (claimed.dim() != alg->dim()) throw AlgebraMismatch("claimed structure constants have the wrong dimension");
}

std::vector<Scalar> flatten(const CMatrix& m) {
  std::vector<Scalar> out;
  out.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

bool ClearedIdentityReport::pass() const {
  for (const auto& e : entries)
    if (!e.residual.is_zero()) return false;
  return true;
}

bool ClearedIdentityReport::printed_form_matches() const {
  for (const auto& e : entries)
    if (!e.printed_residual.is_zero()) return false;
  return true;
}

json ClearedIdentityReport::to_json() const {
  json rows = json::array();
  for (const auto& e : entries) {
    json idx = json::array();
    for (auto i : e.indices) idx.push_back(i);
    rows.push_back({{"indices", idx},
                    {"lhs", render(e.lhs)},
                    {"rhs", render(e.rhs)},
                    {"residual", render(e.residual)},
                    {"printed_rhs", render(e.printed_rhs)},
                    {"printed_residual", render(e.printed_residual)}});
  }
  return {{"identity", identity},
          {"algebra", algebra},
          {"status", pass() ? "pass" : "fail"},
          {"printed_form", printed_form_matches() ? "match" : "printed-form deviation"},
          {"entries", rows}};
}

ClearedIdentityReport audit_cleared_commutator(const AlgebraPtr& alg, const LieAlgebraSpec& claimed) {
  check_claimed(alg, claimed);
  const std::size_t d = alg->dim();
  const Element a = canonical_a(alg);
  ClearedIdentityReport rep{"commutator", alg->lie().label(), {}};
  for (std::size_t k = 0; k < d; ++k) {
    const Element xk = Element::generator(alg, k);
    ClearedIdentityEntry e{{k + 1}, xk * a - a * xk, Element(alg), Element(alg), Element(alg), Element(alg)};
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (sgn(claimed.c(i, k, j)) != 0) e.rhs += Scalar(claimed.c(i, k, j)) * (word(alg, {i, j}) + word(alg, {j, i}));
        // Printed: Y X_k = X_k Y + sum b^j_{kl} Y X_l X_j Y, with l as the summation index.
        const Rational b = b_of(claimed, k, i, j);
        if (sgn(b) != 0) e.printed_rhs += Scalar(b) * word(alg, {i, j});
      }
    e.residual = e.lhs - e.rhs;
    e.printed_residual = e.lhs - e.printed_rhs;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

ClearedIdentityReport audit_cleared_degree2(const AlgebraPtr& alg, const LieAlgebraSpec& claimed) {
  check_claimed(alg, claimed);
  const std::size_t d = alg->dim();
  const Element a = canonical_a(alg);
  ClearedIdentityReport rep{"degree2", alg->lie().label(), {}};
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      const Element xkl = word(alg, {k, l});
      Element sum(alg);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
          const Rational bl = b_of(claimed, l, i, j), bk = b_of(claimed, k, i, j);
          if (sgn(bl) != 0) sum += Scalar(bl) * word(alg, {k, i, j});
          if (sgn(bk) != 0) sum += Scalar(bk) * word(alg, {i, j, l});
        }
      ClearedIdentityEntry e{{k + 1, l + 1}, xkl * a - a * xkl, -sum, Element(alg), sum, Element(alg)};
      e.residual = e.lhs - e.rhs;
      e.printed_residual = e.lhs - e.printed_rhs;
      rep.entries.push_back(std::move(e));
    }
  return rep;
}

// ---------------------------------------------------------------------------

OperatorAlgebraContext::OperatorAlgebraContext(FiniteDimRep rep) : rep_(std::move(rep)) {
  const std::size_t n = rep_.size(), dd = d();
  x_.push_back(Scalar::i() * CMatrix::identity(n));
  for (const auto& m : rep_.mats()) x_.push_back(m);
  a_ = evaluate(rep_, canonical_a(rep_.algebra()));
  auto inv = inverse(a_);
  if (!inv) throw ContextInvalid("A = dU(a) is singular in " + rep_.label());
  y_ = std::move(*inv);
  if (!(a_ * y_ == CMatrix::identity(n)) || !(y_ * a_ == CMatrix::identity(n)))
    throw ContextInvalid("exact inverse check failed");
  for (std::size_t k = 0; k <= dd; ++k)
    for (std::size_t l = 0; l <= dd; ++l) {
      ykl_.push_back(x_[k] * x_[l] * y_);
      yneg_.push_back(y_ * x_[k] * x_[l]);
    }
  for (std::size_t k = 0; k <= dd; ++k)
    for (std::size_t l = 0; l <= dd; ++l)
      if (!(adjoint(y_kl(k, l)) == y_neg(l, k)))
        throw ContextInvalid("Y_kl^* != Y_{-l,-k} for k=" + std::to_string(k) + ", l=" + std::to_string(l));
}

FiniteDimRep parse_context(const AlgebraPtr& alg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ParseError("context must look like 'spins=1/2,1' or 'point=1,2'");
  const std::string kind = spec.substr(0, eq);
  std::vector<Rational> values;
  for (const auto& part : split(spec.substr(eq + 1), ',')) values.push_back(parse_rational(part));
  if (kind == "point") return make_point_rep(alg, values);
  if (kind != "spins" || values.empty()) throw ParseError("unknown context kind '" + kind + "'");
  FiniteDimRep out = make_spin_rep(alg, values.front());
  for (std::size_t i = 1; i < values.size(); ++i) out = direct_sum(out, make_spin_rep(alg, values[i]));
  return out;
}

bool RelationsReport::pass() const {
  for (const auto& r : relations)
    if (!r.pass) return false;
  return true;
}

const RelationAudit& RelationsReport::at(const std::string& id) const {
  for (const auto& r : relations)
    if (r.id == id) return r;
  throw std::out_of_range("no relation " + id);
}

json RelationsReport::to_json() const {
  json rel = json::object();
  for (const auto& r : relations)
    rel[r.id] = {{"status", r.pass ? "pass" : "fail"}, {"residual_norm", r.residual}, {"checks", r.checks},
                 {"note", r.note}};
  return {{"context", context}, {"ideal_rank", ideal_rank}, {"ambient", ambient}, {"relations", rel}};
}

RelationsReport audit_r_relations(const OperatorAlgebraContext& ctx, unsigned ideal_level) {
  const std::size_t d = ctx.d(), n = ctx.size();
  const auto& spec = ctx.rep().algebra()->lie().spec();
  const CMatrix id = CMatrix::identity(n), zero(n, n);
  const Scalar i = Scalar::i();
  auto adj = [&](const CMatrix& m) { return ctx.adjoint(m); };
  auto c = [&](std::size_t a, std::size_t b, std::size_t k) { return Scalar(spec.c(a - 1, b - 1, k - 1)); };
  auto b = [&](std::size_t a, std::size_t bb, std::size_t k) { return Scalar(b_of(spec, a - 1, bb - 1, k - 1)); };
  const auto& Y = ctx.y();

  RelationsReport report;
  report.context = ctx.rep().label();
  report.ambient = n * n;
  report.relations.reserve(9);  // references into it stay valid

  auto exact = [&](const std::string& rid) -> RelationAudit& {
    report.relations.push_back({rid, true, 0, "0", ""});
    return report.relations.back();
  };
  auto record = [&](RelationAudit& r, const CMatrix& residual) {
    ++r.checks;
    if (r.pass && !residual.is_zero()) {
      r.pass = false;
      r.residual = render_matrix(residual);
    }
  };

  {
    auto& r = exact("yadj");
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t l = 0; l <= d; ++l) record(r, adj(ctx.y_kl(k, l)) - ctx.y_neg(l, k));
  }
  {
    auto& r = exact("r1");
    CMatrix lhs = zero;
    for (std::size_t k = 0; k <= d; ++k) lhs += adj(ctx.y_kl(k, 0)) * ctx.y_kl(k, 0);
    record(r, lhs - Y);
  }
  {
    auto& r = exact("r2");
    for (std::size_t k = 1; k <= d; ++k)
      for (std::size_t l = 1; l <= d; ++l) {
        const CMatrix lhs = adj(ctx.y_kl(k, 0)) * ctx.y_kl(l, 0) - adj(ctx.y_kl(l, 0)) * ctx.y_kl(k, 0);
        CMatrix rhs = zero;
        for (std::size_t j = 1; j <= d; ++j) rhs += (Scalar(-1) * i * c(l, k, j)) * (Y * ctx.y_kl(j, 0));
        record(r, lhs - rhs);
      }
    if (!r.pass) r.note = "printed-form deviation";
  }
  {
    auto& r = exact("r3");
    for (std::size_t k = 1; k <= d; ++k) {
      const CMatrix lhs = adj(ctx.y_kl(k, 0)) - ctx.y_kl(k, 0);
      CMatrix rhs = zero;
      for (std::size_t j = 1; j <= d; ++j)
        for (std::size_t l = 1; l <= d; ++l) rhs += (i * b(k, l, j)) * (adj(ctx.y_kl(j, 0)) * ctx.y_kl(l, 0));
      record(r, lhs - rhs);
    }
    if (!r.pass) r.note = "printed-form deviation";
  }
  {
    auto& r = exact("r4");
    CMatrix lhs = zero, rhs1 = id, rhs2 = id;
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t l = 0; l <= d; ++l) lhs += adj(ctx.y_kl(k, l)) * ctx.y_kl(k, l);
    for (std::size_t j = 1; j <= d; ++j)
      for (std::size_t k = 1; k <= d; ++k)
        for (std::size_t l = 1; l <= d; ++l) {
          const Scalar coeff = i * b(j, k, l);
          if (coeff.is_zero()) continue;
          rhs1 += coeff * (adj(ctx.y_kl(j, 0)) * ctx.y_kl(k, l));
          rhs2 -= coeff * (adj(ctx.y_kl(k, l)) * ctx.y_kl(j, 0));
        }
    record(r, lhs - rhs1);
    record(r, lhs - rhs2);
    if (!r.pass) r.note = "printed-form deviation";
  }

  // Degree-bounded span of the two-sided ideal generated by Y_{k0}, k = -d..d.
  std::vector<CMatrix> gens;
  for (std::size_t k = 0; k <= d; ++k)
    for (std::size_t l = 0; l <= d; ++l) {
      gens.push_back(ctx.y_kl(k, l));
      gens.push_back(ctx.y_neg(l, k));
    }
  std::vector<CMatrix> words{id};
  for (unsigned level = 0, begin = 0; level < ideal_level; ++level) {
    const std::size_t end = words.size();
    for (std::size_t w = begin; w < end; ++w)
      for (const auto& g : gens) words.push_back(words[w] * g);
    begin = static_cast<unsigned>(end);
  }
  std::vector<CMatrix> ideal_gens;
  for (std::size_t k = 0; k <= d; ++k) {
    ideal_gens.push_back(ctx.y_kl(k, 0));
    ideal_gens.push_back(ctx.y_neg(k, 0));
  }
  SpanBasis<Scalar> ideal(n * n);
  for (const auto& u : words) {
    for (const auto& g : ideal_gens) {
      const CMatrix ug = u * g;
      for (const auto& v : words) {
        ideal.add(flatten(ug * v));
        if (ideal.rank() == n * n) break;
      }
      if (ideal.rank() == n * n) break;
    }
    if (ideal.rank() == n * n) break;
  }
  report.ideal_rank = ideal.rank();
  const std::string full_note =
      ideal.rank() == n * n ? "the bounded ideal span is the full matrix algebra of this context" : "";

  auto member = [&](const std::string& rid) -> RelationAudit& {
    auto& r = exact(rid);
    r.note = full_note;
    return r;
  };
  auto test = [&](RelationAudit& r, const CMatrix& residual) {
    ++r.checks;
    if (r.pass && !ideal.contains(flatten(residual))) {
      r.pass = false;
      r.residual = render_matrix(residual);
    }
  };
  {
    auto& r = member("r5");
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t l = 0; l <= d; ++l) {
        test(r, ctx.y_kl(k, l) - adj(ctx.y_kl(k, l)));
        test(r, ctx.y_kl(k, l) - ctx.y_kl(l, k));
      }
  }
  {
    // Y x - x Y in Y X_0  <=>  A (Y x - x Y) in X_0.
    auto& r = member("r6");
    for (const auto& g : gens) test(r, ctx.a() * (Y * g - g * Y));
  }
  {
    auto& r7 = member("r7");
    auto& r8 = member("r8");
    for (std::size_t k = 1; k <= d; ++k)
      for (std::size_t l = 1; l <= d; ++l)
        for (std::size_t p = 1; p <= d; ++p)
          for (std::size_t q = 1; q <= d; ++q) {
            const auto& ykl = ctx.y_kl(k, l);
            const auto& ypq = ctx.y_kl(p, q);
            test(r7, ykl * ypq - ypq * ykl);
            test(r8, ykl * ypq - ctx.y_kl(k, p) * ctx.y_kl(l, q));
          }
  }
  return report;
}

}  // namespace envsos
