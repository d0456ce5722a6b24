#include "gram_system.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace envsos::detail {

namespace {

// Coefficient of row r (2*monomial + {0: real, 1: imaginary}).
Rational row_part(const Scalar& s, bool imag) { return imag ? s.im() : s.re(); }

double weighted_norm(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += w[j] * (a[j] - b[j]) * (a[j] - b[j]);
  return std::sqrt(s);
}

}  // namespace

Presolve presolve(const GramInput& in) {
  Presolve out;
  for (std::size_t n : in.sizes) {
    std::vector<std::size_t> all(n);
    for (std::size_t p = 0; p < n; ++p) all[p] = p;
    out.active.push_back(std::move(all));
  }
  const std::size_t nrows = 2 * in.target.size();
  for (;;) {
    struct RowInfo {
      std::vector<std::pair<std::pair<std::size_t, std::size_t>, Rational>> diag;
      bool off = false;
    };
    std::vector<RowInfo> rows(nrows);
    for (std::size_t b = 0; b < in.sizes.size(); ++b) {
      const std::size_t n = in.sizes[b];
      const auto& act = out.active[b];
      for (std::size_t p : act)
        for (const auto& [mono, s] : in.entries[b][p * n + p])
          for (bool imag : {false, true}) {
            Rational v = row_part(s, imag);
            if (sgn(v) != 0) rows[2 * mono + imag].diag.push_back({{b, p}, v});
          }
      for (std::size_t i = 0; i < act.size(); ++i)
        for (std::size_t j = i + 1; j < act.size(); ++j) {
          const auto& epq = in.entries[b][act[i] * n + act[j]];
          const auto& eqp = in.entries[b][act[j] * n + act[i]];
          SparseRow sum = epq, diff = epq;
          for (const auto& [mono, s] : eqp) {
            sum[mono] += s;
            diff[mono] -= s;
          }
          for (const auto& [mono, s] : sum) {
            if (sgn(s.re()) != 0) rows[2 * mono].off = true;
            if (sgn(s.im()) != 0) rows[2 * mono + 1].off = true;
          }
          if (!in.hermitian) continue;
          for (const auto& [mono, s] : diff) {  // i*(E_pq - E_qp)
            if (sgn(s.im()) != 0) rows[2 * mono].off = true;
            if (sgn(s.re()) != 0) rows[2 * mono + 1].off = true;
          }
        }
    }
    bool changed = false;
    for (std::size_t r = 0; r < nrows; ++r) {
      const Rational target = row_part(in.target[r / 2], r % 2 == 1);
      const auto& info = rows[r];
      if (info.off) continue;
      if (info.diag.empty()) {
        if (sgn(target) != 0) {
          out.infeasible = true;
          out.reason = "a target coefficient cannot be produced by any Gram entry";
          return out;
        }
        continue;
      }
      const int s = sgn(info.diag.front().second);
      bool same = true;
      Rational total = 0;
      for (const auto& [where, v] : info.diag) {
        same = same && sgn(v) == s;
        total += abs(v);
      }
      if (!same) continue;
      if (sgn(target) == 0) {
        for (const auto& [where, v] : info.diag) {
          auto& act = out.active[where.first];
          auto it = std::find(act.begin(), act.end(), where.second);
          if (it != act.end()) {
            act.erase(it);
            changed = true;
          }
        }
      } else if (sgn(target) != s) {
        // mu = s * e_r gives Z = diag(|a|) >= 0 and mu^T b < 0.
        out.infeasible = true;
        out.dual_value = Rational(Rational(s) * target / total).get_d();
        out.reason = "a nonnegative combination of diagonal Gram entries must equal a negative number";
        return out;
      }
    }
    if (!changed) return out;
  }
}

GramSystem::GramSystem(GramInput in) : in_(std::move(in)), pre_(presolve(in_)) {
  if (pre_.infeasible) return;
  for (std::size_t b = 0; b < in_.sizes.size(); ++b) {
    block_offset_.push_back(coords_.size());
    const auto& act = pre_.active[b];
    for (std::size_t p : act) coords_.push_back({b, p, p, false});
    for (std::size_t i = 0; i < act.size(); ++i)
      for (std::size_t j = i + 1; j < act.size(); ++j) {
        coords_.push_back({b, act[i], act[j], false});
        if (in_.hermitian) coords_.push_back({b, act[i], act[j], true});
      }
  }
  const std::size_t n = coords_.size();
  const std::size_t nparts = in_.hermitian ? 2 : 1;
  const std::size_t nrows = nparts * in_.target.size();
  QMatrix full(nrows, n), augmented(nrows, n + 1);
  std::vector<Rational> rhs(nrows);
  for (std::size_t mono = 0; mono < in_.target.size(); ++mono)
    for (std::size_t part = 0; part < nparts; ++part) rhs[nparts * mono + part] = row_part(in_.target[mono], part == 1);
  for (std::size_t c = 0; c < n; ++c) {
    const auto& co = coords_[c];
    const std::size_t sz = in_.sizes[co.block];
    const auto& epq = in_.entries[co.block][co.p * sz + co.q];
    SparseRow contrib;
    if (co.p == co.q) {
      contrib = epq;
    } else {
      const auto& eqp = in_.entries[co.block][co.q * sz + co.p];
      contrib = epq;
      for (const auto& [mono, s] : eqp) contrib[mono] += co.imag ? -s : s;
      if (co.imag)
        for (auto& [mono, s] : contrib) s = Scalar::i() * s;
    }
    for (const auto& [mono, s] : contrib)
      for (std::size_t part = 0; part < nparts; ++part) full(nparts * mono + part, c) = row_part(s, part == 1);
  }
  for (std::size_t r = 0; r < nrows; ++r) {
    for (std::size_t c = 0; c < n; ++c) augmented(r, c) = full(r, c);
    augmented(r, n) = rhs[r];
  }
  const auto rows = independent_rows(full);
  if (independent_rows(augmented).size() != rows.size()) {
    pre_.infeasible = true;
    pre_.reason = "the linear coefficient-matching system is inconsistent";
    return;
  }
  rows_ = rows.size();
  a_ = QMatrix(rows_, n);
  b_.resize(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < n; ++c) a_(r, c) = full(rows[r], c);
    b_[r] = rhs[rows[r]];
  }

  std::vector<Rational> winv(n);
  for (std::size_t c = 0; c < n; ++c) winv[c] = coords_[c].p == coords_[c].q ? Rational(1) : Rational(1, 2);
  std::vector<std::vector<std::size_t>> nz(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (sgn(a_(r, c)) != 0) nz[r].push_back(c);
  QMatrix k(rows_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < rows_; ++j) {
      Rational s = 0;
      for (std::size_t c : nz[i])
        if (sgn(a_(j, c)) != 0) s += a_(i, c) * a_(j, c) * winv[c];
      k(i, j) = s;
      k(j, i) = s;
    }
  QMatrix kinv = rows_ ? *inverse(k) : QMatrix();
  m_ = QMatrix(n, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c : nz[r]) {
      const Rational awc = a_(r, c) * winv[c];
      for (std::size_t s = 0; s < rows_; ++s)
        if (sgn(kinv(r, s)) != 0) m_(c, s) += awc * kinv(r, s);
    }

  a_d_.assign(rows_ * n, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < n; ++c) a_d_[r * n + c] = a_(r, c).get_d();
  b_d_.resize(rows_);
  for (std::size_t r = 0; r < rows_; ++r) b_d_[r] = b_[r].get_d();
  kinv_.assign(rows_ * rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t s = 0; s < rows_; ++s) kinv_[r * rows_ + s] = kinv(r, s).get_d();

  Eigen::MatrixXd md(n, rows_), ad(rows_, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < rows_; ++r) md(c, r) = m_(c, r).get_d();
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < n; ++c) ad(r, c) = a_d_[r * n + c];
  Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - md * ad;
  Eigen::VectorXd bd(rows_);
  for (std::size_t r = 0; r < rows_; ++r) bd(r) = b_d_[r];
  Eigen::VectorXd qd = md * bd;
  p_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p_[i * n + j] = proj(i, j);
  q_.assign(qd.data(), qd.data() + n);
}

std::size_t GramSystem::max_active_block() const {
  std::size_t m = 0;
  for (const auto& act : pre_.active) m = std::max(m, act.size());
  return m;
}

std::vector<double> GramSystem::project_affine(const std::vector<double>& x) const {
  const std::size_t n = coords_.size();
  std::vector<double> out(q_);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &p_[i * n];
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    out[i] += s;
  }
  return out;
}

namespace {

// Eigen view of one block: Hermitian matrix over the active basis.
Eigen::MatrixXcd block_matrix(const std::vector<double>& x, std::size_t begin, std::size_t end, std::size_t size,
                              bool hermitian) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(size, size);
  std::size_t c = begin;
  for (std::size_t p = 0; p < size; ++p) g(p, p) = x[c++];
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) {
      const double re = x[c++];
      const double im = hermitian ? x[c++] : 0.0;
      g(i, j) = {re, im};
      g(j, i) = {re, -im};
    }
  (void)end;
  return g;
}

void store_block(const Eigen::MatrixXcd& g, std::size_t begin, bool hermitian, std::vector<double>& out) {
  const std::size_t size = g.rows();
  std::size_t c = begin;
  for (std::size_t p = 0; p < size; ++p) out[c++] = g(p, p).real();
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i + 1; j < size; ++j) {
      out[c++] = g(i, j).real();
      if (hermitian) out[c++] = g(i, j).imag();
    }
}

}  // namespace

double GramSystem::project_psd(const std::vector<double>& x, double margin, std::vector<double>& out) const {
  out = x;
  for (std::size_t b = 0; b < in_.sizes.size(); ++b) {
    const std::size_t size = pre_.active[b].size();
    if (size == 0) continue;
    const std::size_t begin = block_offset_[b];
    Eigen::MatrixXcd g = block_matrix(x, begin, 0, size, in_.hermitian);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(margin);
    Eigen::MatrixXcd clipped = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    store_block(clipped, begin, in_.hermitian, out);
  }
  std::vector<double> w(coords_.size());
  for (std::size_t c = 0; c < w.size(); ++c) w[c] = coords_[c].p == coords_[c].q ? 1.0 : 2.0;
  return weighted_norm(x, out, w);
}

double GramSystem::min_eigenvalue(const std::vector<double>& x) const {
  double m = 0;
  bool first = true;
  for (std::size_t b = 0; b < in_.sizes.size(); ++b) {
    const std::size_t size = pre_.active[b].size();
    if (size == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block_matrix(x, block_offset_[b], 0, size, in_.hermitian),
                                                       Eigen::EigenvaluesOnly);
    const double v = es.eigenvalues().minCoeff();
    m = first ? v : std::min(m, v);
    first = false;
  }
  return m;
}

NumericOutcome GramSystem::solve(const SolverOptions& opts, double margin, std::vector<double> start) const {
  const std::size_t n = coords_.size();
  NumericOutcome out;
  if (start.size() != n) {
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    start.resize(n);
    for (auto& v : start) v = normal(rng);
  }
  std::vector<double> y = std::move(start), xa;
  const double accept = margin > 0 ? margin / 4 : opts.tol;
  constexpr std::size_t window = 500;
  double previous_gap = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    xa = project_affine(y);
    out.gap = project_psd(xa, margin, y);
    out.iterations = it;
    if (out.gap <= accept) {
      out.kind = NumericOutcome::Kind::Candidate;
      break;
    }
    if (it % window == 0) {
      const bool stalled = out.gap > (1 - 1e-3) * previous_gap;
      previous_gap = out.gap;
      if (!stalled) continue;
      // Separating functional from the stalled pair: Z = W^{-1} A^T mu with
      // mu = K^{-1}(A y - b); mu^T b < 0 with Z >= 0 rules out feasibility.
      std::vector<double> resid(rows_), mu(rows_, 0.0), z(n, 0.0);
      for (std::size_t r = 0; r < rows_; ++r) {
        double s = -b_d_[r];
        for (std::size_t c = 0; c < n; ++c) s += a_d_[r * n + c] * y[c];
        resid[r] = s;
      }
      double mub = 0;
      for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t s = 0; s < rows_; ++s) mu[r] += kinv_[r * rows_ + s] * resid[s];
        mub += mu[r] * b_d_[r];
      }
      double trace = 0;
      for (std::size_t c = 0; c < n; ++c) {
        const bool diag = coords_[c].p == coords_[c].q;
        for (std::size_t r = 0; r < rows_; ++r) z[c] += a_d_[r * n + c] * mu[r];
        if (!diag) z[c] /= 2;
        if (diag) trace += z[c];
      }
      if (trace > 0) {
        const double value = mub / trace;
        const double zmin = min_eigenvalue(z) / trace;
        out.dual_value = value;
        if (value < -opts.dual_tol && zmin > -1e-6) {
          out.kind = NumericOutcome::Kind::Infeasible;
          break;
        }
      }
      out.kind = NumericOutcome::Kind::Stalled;
      break;
    }
  }
  out.point = xa;
  out.psd_point = y;
  if (!xa.empty() || n == 0) {
    out.min_eigenvalue = n ? min_eigenvalue(xa) : 0.0;
    double res = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      double s = -b_d_[r];
      for (std::size_t c = 0; c < n; ++c) s += a_d_[r * n + c] * xa[c];
      res = std::max(res, std::abs(s));
    }
    out.residual = res;
  }
  if (n == 0) out.kind = NumericOutcome::Kind::Candidate;
  return out;
}

std::vector<CMatrix> GramSystem::grams_from(const std::vector<Rational>& x) const {
  std::vector<CMatrix> grams;
  for (std::size_t n : in_.sizes) grams.emplace_back(n, n);
  for (std::size_t c = 0; c < coords_.size(); ++c) {
    const auto& co = coords_[c];
    auto& g = grams[co.block];
    if (co.p == co.q) {
      g(co.p, co.p) = Scalar(x[c]);
    } else if (co.imag) {
      g(co.p, co.q) = Scalar(g(co.p, co.q).re(), x[c]);
      g(co.q, co.p) = g(co.p, co.q).conj();
    } else {
      g(co.p, co.q) = Scalar(x[c], g(co.p, co.q).im());
      g(co.q, co.p) = g(co.p, co.q).conj();
    }
  }
  return grams;
}

std::optional<std::vector<CMatrix>> GramSystem::round(const std::vector<double>& x, int bits) const {
  const std::size_t n = coords_.size();
  if (x.size() != n) return std::nullopt;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(bits));
  std::vector<Rational> xr(n);
  for (std::size_t c = 0; c < n; ++c) {
    mpz_class num(std::nearbyint(std::ldexp(x[c], bits)));
    xr[c] = Rational(num, scale);
    xr[c].canonicalize();
  }
  std::vector<Rational> resid(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rational s = -b_[r];
    for (std::size_t c = 0; c < n; ++c)
      if (sgn(a_(r, c)) != 0) s += a_(r, c) * xr[c];
    resid[r] = s;
  }
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < rows_; ++r)
      if (sgn(resid[r]) != 0 && sgn(m_(c, r)) != 0) xr[c] -= m_(c, r) * resid[r];
  auto grams = grams_from(xr);
  for (const auto& g : grams)
    if (!hermitian_ldl(g).psd) return std::nullopt;
  return grams;
}

NumericSearch numeric_search(const GramSystem& sys, const SolverOptions& opts, std::size_t first_margin,
                             std::vector<double> start) {
  NumericSearch res;
  auto& sum = res.summary;
  if (sys.infeasible()) {
    sum.status = FeasibilityStatus::InfeasibleEvidence;
    sum.dual_value = sys.presolved().dual_value;
    sum.note = "exact: " + sys.presolved().reason;
    res.next_margin = opts.margins.size();
    return res;
  }
  if (sys.max_active_block() > opts.max_block) {
    sum.note = "Gram block of size " + std::to_string(sys.max_active_block()) + " exceeds the cap " +
               std::to_string(opts.max_block);
    res.next_margin = opts.margins.size();
    return res;
  }
  for (std::size_t k = first_margin; k < opts.margins.size(); ++k) {
    const double margin = opts.margins[k];
    auto out = sys.solve(opts, margin, start);
    sum.iterations += out.iterations;
    sum.residual = out.residual;
    sum.min_eigenvalue = out.min_eigenvalue;
    if (out.dual_value) sum.dual_value = out.dual_value;
    start = out.psd_point;
    res.next_margin = k + 1;
    if (out.kind == NumericOutcome::Kind::Infeasible) {
      sum.status = FeasibilityStatus::InfeasibleEvidence;
      sum.note = "alternating projections stalled at a separating functional";
      return res;
    }
    if (out.kind == NumericOutcome::Kind::Candidate) {
      res.candidate = true;
      res.point = std::move(out.point);
      res.psd_point = std::move(out.psd_point);
      sum.margin = margin;
      return res;
    }
  }
  res.psd_point = std::move(start);
  std::ostringstream note;
  note << "no candidate within " << opts.max_iterations << " iterations per margin stage";
  sum.note = note.str();
  return res;
}

std::optional<std::pair<int, std::vector<CMatrix>>> round_candidate(
    const GramSystem& sys, const std::vector<double>& point, const SolverOptions& opts,
    const std::function<bool(const std::vector<CMatrix>&)>& accept) {
  for (int bits : opts.rounding_bits) {
    auto grams = sys.round(point, bits);
    if (grams && accept(*grams)) return std::make_pair(bits, std::move(*grams));
  }
  return std::nullopt;
}

PipelineResult run_pipeline(const GramSystem& sys, const SolverOptions& opts,
                            const std::function<bool(const std::vector<CMatrix>&)>& accept) {
  PipelineResult res;
  std::size_t next = 0;
  std::vector<double> start;
  std::size_t iterations = 0;
  for (;;) {
    auto search = numeric_search(sys, opts, next, std::move(start));
    iterations += search.summary.iterations;
    res.summary = search.summary;
    res.summary.iterations = iterations;
    if (!search.candidate) return res;
    if (auto rounded = round_candidate(sys, search.point, opts, accept)) {
      res.summary.status = FeasibilityStatus::Certificate;
      res.summary.rounding_bits = rounded->first;
      res.grams = std::move(rounded->second);
      return res;
    }
    res.summary.note = "rounding failed at every precision";
    next = search.next_margin;
    start = std::move(search.psd_point);
    if (next >= opts.margins.size()) return res;
  }
}

}  // namespace envsos::detail
