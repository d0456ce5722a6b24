#pragma once

// Internal: the realified linear system behind every Gram feasibility
// problem, shared by the enveloping-algebra and commutative SOS modes.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "envsos/exact_matrix.hpp"
#include "envsos/sos.hpp"

namespace envsos::detail {

/// Coefficients over the monomial index space.
using SparseRow = std::map<std::size_t, Scalar>;

/// sum_b sum_{p,q} G_b(p,q) * entries[b][p*n_b+q] = target, G_b PSD.
struct GramInput {
  bool hermitian = true;  // complex Hermitian blocks; otherwise real symmetric
  std::vector<std::size_t> sizes;
  std::vector<std::vector<SparseRow>> entries;
  std::vector<Scalar> target;
};

/// Outcome of removing basis elements whose diagonal Gram entry is forced to
/// vanish, plus any exact infeasibility found on the way.
struct Presolve {
  std::vector<std::vector<std::size_t>> active;
  bool infeasible = false;
  std::optional<double> dual_value;  // exact Farkas value when available
  std::string reason;
};

Presolve presolve(const GramInput& in);

struct NumericOutcome {
  enum class Kind { Candidate, Infeasible, Stalled, IterationLimit } kind = Kind::IterationLimit;
  std::vector<double> point;  // affine-feasible coordinates
  std::vector<double> psd_point;
  double gap = 0;             // weighted distance between the two iterates
  double residual = 0;        // |A x - b|_inf of `point`
  double min_eigenvalue = 0;  // of `point`
  std::optional<double> dual_value;
  std::size_t iterations = 0;
};

class GramSystem {
 public:
  explicit GramSystem(GramInput in);

  bool hermitian() const { return in_.hermitian; }
  const Presolve& presolved() const { return pre_; }
  bool infeasible() const { return pre_.infeasible; }
  std::size_t num_coords() const { return coords_.size(); }
  std::size_t num_rows() const { return rows_; }
  std::size_t max_active_block() const;

  /// Alternating projections between the affine set and {G >= margin*I}.
  NumericOutcome solve(const SolverOptions& opts, double margin, std::vector<double> start) const;
  /// Dyadic rounding with 2^-bits, exact projection, exact PSD test. Returns
  /// Grams on the full (not only active) bases.
  std::optional<std::vector<CMatrix>> round(const std::vector<double>& x, int bits) const;

 private:
  struct Coord {
    std::size_t block, p, q;
    bool imag;
  };

  std::vector<double> project_affine(const std::vector<double>& x) const;
  double project_psd(const std::vector<double>& x, double margin, std::vector<double>& out) const;
  double min_eigenvalue(const std::vector<double>& x) const;
  std::vector<CMatrix> grams_from(const std::vector<Rational>& x) const;

  GramInput in_;
  Presolve pre_;
  std::vector<Coord> coords_;
  std::vector<std::size_t> block_offset_;
  std::size_t rows_ = 0;
  QMatrix a_;              // independent rows
  std::vector<Rational> b_;
  QMatrix m_;              // W^{-1} A^T K^{-1}
  std::vector<double> p_;  // dense projector I - M A, row-major
  std::vector<double> q_;  // M b
  std::vector<double> kinv_;  // K^{-1} as double, row-major
  std::vector<double> a_d_;   // A as double, row-major
  std::vector<double> b_d_;
};

/// Walks the margin schedule from `first_margin` until a candidate with a
/// PSD margin, infeasibility evidence, or exhaustion.
struct NumericSearch {
  bool candidate = false;
  std::vector<double> point;
  std::vector<double> psd_point;
  std::size_t next_margin = 0;  // where to resume after a failed rounding
  SolveSummary summary;
};

NumericSearch numeric_search(const GramSystem& sys, const SolverOptions& opts, std::size_t first_margin = 0,
                             std::vector<double> start = {});

/// Rounds at each configured precision; the first exact PSD point that
/// `accept` takes wins.
std::optional<std::pair<int, std::vector<CMatrix>>> round_candidate(
    const GramSystem& sys, const std::vector<double>& point, const SolverOptions& opts,
    const std::function<bool(const std::vector<CMatrix>&)>& accept);

/// Runs the margin schedule and rounding on one system. `accept` turns exact
/// Grams into an emitted certificate (returning false rejects them).
struct PipelineResult {
  SolveSummary summary;
  std::optional<std::vector<CMatrix>> grams;
};

PipelineResult run_pipeline(const GramSystem& sys, const SolverOptions& opts,
                            const std::function<bool(const std::vector<CMatrix>&)>& accept);

}  // namespace envsos::detail
