#include "envsos/representation.hpp"

#include "envsos/errors.hpp"

namespace envsos {

namespace {

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, a.cols() + j) = b(i, j);
  return out;
}

bool is_su2(const Algebra& alg) { return alg.same_as(Algebra(builtin("su2"))); }

}  // namespace

FiniteDimRep::FiniteDimRep(AlgebraPtr alg, std::vector<CMatrix> mats, std::vector<Rational> metric, std::string label)
    : alg_(std::move(alg)), mats_(std::move(mats)), metric_(std::move(metric)), label_(std::move(label)) {
  const std::size_t n = metric_.size();
  const std::size_t d = alg_->dim();
  if (n == 0) throw InvalidRepresentation("representation space must be nonzero");
  if (mats_.size() != d) throw InvalidRepresentation("need one matrix per basis element");
  for (const auto& s : metric_)
    if (sgn(s) <= 0) throw InvalidRepresentation("metric entries must be positive");
  for (const auto& m : mats_)
    if (m.rows() != n || m.cols() != n) throw InvalidRepresentation("matrix size differs from metric length");
  const auto& lie = alg_->lie();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      CMatrix lhs = mats_[i] * mats_[j] - mats_[j] * mats_[i];
      for (const auto& t : lie.bracket(i, j)) lhs -= Scalar(t.coeff) * mats_[t.k];
      if (!lhs.is_zero())
        throw InvalidRepresentation("bracket [" + lie.names()[i] + "," + lie.names()[j] + "] not respected");
    }
  for (std::size_t k = 0; k < d; ++k) {
    CMatrix w = weighted(mats_[k]);
    if (!(w + w.adjoint()).is_zero())
      throw InvalidRepresentation("image of " + lie.names()[k] + " is not skew-adjoint in the metric");
  }
}

CMatrix FiniteDimRep::weighted(const CMatrix& m) const {
  CMatrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= Scalar(metric_[i]);
  return out;
}

CMatrix FiniteDimRep::adjoint(const CMatrix& m) const {
  CMatrix out = m.adjoint();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= Scalar(metric_[j] / metric_[i]);
  return out;
}

FiniteDimRep make_spin_rep(const AlgebraPtr& su2, const Rational& spin_in) {
  Rational spin = spin_in;
  spin.canonicalize();
  if (!is_su2(*su2)) throw InvalidInstance("spin representations need the builtin su2 algebra");
  const Rational twice = 2 * spin;
  if (sgn(spin) < 0 || twice.get_den() != 1) throw InvalidInstance("spin must be a nonnegative half-integer");
  const std::size_t n = twice.get_num().get_ui() + 1;
  auto weight = [&](std::size_t idx) { return Rational(-spin + Rational(static_cast<long>(idx))); };

  CMatrix raise(n, n), lower(n, n), x1(n, n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Rational m = weight(idx);
    x1(idx, idx) = Scalar(Rational(0), -m);
    if (idx + 1 < n) raise(idx + 1, idx) = Scalar((spin - m) * (spin + m + 1));
    if (idx > 0) lower(idx - 1, idx) = Scalar(1);
  }
  const Scalar half_i(Rational(0), Rational(1, 2));
  CMatrix x2 = (-half_i) * (raise + lower);
  CMatrix x3 = Scalar(Rational(-1, 2)) * (raise - lower);

  // S_l = 1 and S_m = (l-m)(l+m+1) S_{m+1}.
  std::vector<Rational> metric(n);
  metric[n - 1] = 1;
  for (std::size_t idx = n - 1; idx-- > 0;) {
    const Rational m = weight(idx);
    metric[idx] = (spin - m) * (spin + m + 1) * metric[idx + 1];
  }
  return FiniteDimRep(su2, {x1, x2, x3}, std::move(metric), "spin " + spin.get_str());
}

FiniteDimRep make_point_rep(const AlgebraPtr& abelian, const std::vector<Rational>& t) {
  if (!abelian->lie().is_abelian()) throw NotAbelian("point representations need an abelian algebra");
  if (t.size() != abelian->dim()) throw InvalidInstance("point has wrong dimension");
  std::vector<CMatrix> mats;
  std::string label = "(";
  for (std::size_t j = 0; j < t.size(); ++j) {
    CMatrix m(1, 1);
    m(0, 0) = Scalar(Rational(0), t[j]);
    mats.push_back(m);
    label += (j ? "," : "") + t[j].get_str();
  }
  return FiniteDimRep(abelian, std::move(mats), {Rational(1)}, label + ")");
}

FiniteDimRep direct_sum(const FiniteDimRep& a, const FiniteDimRep& b) {
  std::vector<CMatrix> mats;
  for (std::size_t k = 0; k < a.mats().size(); ++k) mats.push_back(block_diag(a.mats()[k], b.mats()[k]));
  std::vector<Rational> metric = a.metric();
  metric.insert(metric.end(), b.metric().begin(), b.metric().end());
  return FiniteDimRep(a.algebra(), std::move(mats), std::move(metric), a.label() + " + " + b.label());
}

CMatrix evaluate(const FiniteDimRep& rep, const Element& e) {
  if (!rep.algebra()->same_as(*e.algebra())) throw AlgebraMismatch("element and representation differ in algebra");
  const std::size_t n = rep.size();
  std::vector<std::vector<CMatrix>> powers(rep.mats().size(), std::vector<CMatrix>{CMatrix::identity(n)});
  auto power = [&](std::size_t j, unsigned k) -> const CMatrix& {
    while (powers[j].size() <= k) powers[j].push_back(powers[j].back() * rep.mats()[j]);
    return powers[j][k];
  };
  CMatrix out(n, n);
  for (const auto& [m, c] : e.terms()) {
    CMatrix term = CMatrix::identity(n);
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] > 0) term = term * power(j, m[j]);
    out += c * term;
  }
  return out;
}

PositivityVerdict is_positive(const FiniteDimRep& rep, const Element& e) {
  if (!e.is_hermitean()) throw NotHermitean("'" + render(e) + "' is not hermitean");
  const auto ldl = hermitian_ldl(rep.weighted(evaluate(rep, e)));
  PositivityVerdict v;
  v.positive = ldl.psd;
  if (!ldl.psd) {
    v.witness = ldl.witness;
    v.witness_value = ldl.witness_value;
  }
  return v;
}

std::vector<DualLabel> window_representations(const AlgebraPtr& alg, const DualWindow& window) {
  std::vector<DualLabel> out;
  if (window.lmax) {
    if (!is_su2(*alg)) throw InvalidInstance("a spin window needs the su2 algebra");
    for (Rational l = 0; l <= *window.lmax; l += Rational(1, 2)) out.push_back({l.get_str(), make_spin_rep(alg, l)});
  }
  for (const auto& t : window.points) {
    auto rep = make_point_rep(alg, t);
    out.push_back({rep.label(), rep});
  }
  return out;
}

bool DualWindowResult::is_member(const std::string& label) const {
  for (const auto& m : members)
    if (m == label) return true;
  return false;
}

nlohmann::json DualWindowResult::to_json() const {
  nlohmann::json w = nlohmann::json::object();
  for (const auto& [label, wit] : witnesses) {
    nlohmann::json vec = nlohmann::json::array();
    for (const auto& s : wit.vector) vec.push_back(s.to_json());
    w[label] = {{"generator", wit.generator + 1}, {"vector", vec}, {"value", rational_to_json(wit.value)}};
  }
  return {{"window", window}, {"members", members}, {"witnesses", w}};
}

DualWindowResult scan_dual_window(const std::vector<Element>& f, const DualWindow& window) {
  if (f.empty() || f.front() != Element::one(f.front().algebra()))
    throw InvalidInstance("the first generator must be the unit 1");
  for (const auto& g : f)
    if (!g.is_hermitean()) throw NotHermitean("generator '" + render(g) + "' is not hermitean");
  DualWindowResult res;
  for (const auto& [name, rep] : window_representations(f.front().algebra(), window)) {
    res.window.push_back(name);
    bool member = true;
    for (std::size_t l = 0; l < f.size() && member; ++l) {
      auto v = is_positive(rep, f[l]);
      if (!v.positive) {
        member = false;
        res.witnesses.emplace(name, WindowWitness{l, v.witness, v.witness_value});
      }
    }
    if (member) res.members.push_back(name);
  }
  return res;
}

nlohmann::json rep_to_json(const FiniteDimRep& rep) {
  nlohmann::json mats = nlohmann::json::array();
  for (const auto& m : rep.mats()) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_json());
      rows.push_back(row);
    }
    mats.push_back(rows);
  }
  nlohmann::json metric = nlohmann::json::array();
  for (const auto& s : rep.metric()) metric.push_back(rational_to_json(s));
  return {{"label", rep.label()}, {"dim", rep.size()}, {"mats", mats}, {"metric", metric}};
}

}  // namespace envsos
