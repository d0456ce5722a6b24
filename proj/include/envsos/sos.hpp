#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "envsos/exact_matrix.hpp"
#include "envsos/pbw.hpp"

namespace envsos {

namespace detail {
class GramSystem;
}

struct SolverOptions {
  double tol = 1e-9;                // numeric residual / eigenvalue tolerance
  double dual_tol = 1e-6;           // dual value needed to report infeasibility
  std::size_t max_block = 60;       // largest Gram block attempted
  std::size_t max_iterations = 20000;  // per margin stage
  std::vector<double> margins{1e-2, 1e-4, 1e-6, 0.0};
  std::vector<int> rounding_bits{10, 20, 30, 40, 50, 60};
  std::uint64_t seed = 1;

  nlohmann::json to_json() const;
};

enum class FeasibilityStatus { Certificate, InfeasibleEvidence, Inconclusive };
std::string to_string(FeasibilityStatus s);

/// Numeric bookkeeping of one feasibility run.
struct SolveSummary {
  FeasibilityStatus status = FeasibilityStatus::Inconclusive;
  double residual = 0;
  double min_eigenvalue = 0;
  std::optional<double> dual_value;  // negative when infeasibility evidence
  std::size_t iterations = 0;
  std::optional<double> margin;      // margin stage that produced the candidate
  std::optional<int> rounding_bits;
  std::string note;

  nlohmann::json to_json() const;
};

/// One Gram block: generator f_l and its PBW monomial basis W_l.
struct GramBlock {
  std::size_t generator;  // 0-based index into f
  std::vector<Monomial> basis;
};

/// Gram feasibility problem for c in T_f at degree D.
class SdpProblem {
 public:
  SdpProblem(Element target, std::vector<Element> generators, unsigned degree);

  const Element& target() const { return target_; }
  const std::vector<Element>& generators() const { return generators_; }
  unsigned degree() const { return degree_; }
  const std::vector<GramBlock>& blocks() const { return blocks_; }
  /// PBW monomials that occur in the coefficient matching, canonical order.
  const std::vector<Monomial>& monomials() const { return monomials_; }
  std::size_t num_constraints() const { return monomials_.size(); }
  const detail::GramSystem& system() const { return *system_; }

  /// sum_l sum_{p,q} G_l(p,q) w_p^* f_l w_q for Grams on the full bases.
  Element expand(const std::vector<CMatrix>& grams) const;
  bool satisfied_by(const std::vector<CMatrix>& grams) const { return expand(grams) == target_; }

 private:
  Element target_;
  std::vector<Element> generators_;
  unsigned degree_;
  std::vector<GramBlock> blocks_;
  std::vector<Monomial> monomials_;
  std::shared_ptr<const detail::GramSystem> system_;
};

/// Builds the exact system. W_l holds every monomial w with
/// 2 deg(w) + deg(f_l) <= D. Throws OddDegreeTarget (D odd), NotHermitean,
/// DegreeMismatch (deg c > D), InvalidInstance (f_1 != 1).
SdpProblem build_gram_problem(const Element& c, const std::vector<Element>& f, unsigned degree);

struct CertificateBlock {
  std::size_t generator;
  std::vector<Element> basis;
  CMatrix gram;
};

/// c = sum_l sum_{p,q} G_l(p,q) b_p^* f_l b_q with every G_l Hermitian PSD.
struct WeightedSosCertificate {
  unsigned degree = 0;
  Element target;
  std::vector<Element> generators;
  std::vector<CertificateBlock> blocks;

  nlohmann::json to_json() const;
  /// Parses to_json() output; the algebra is rebuilt from the embedded spec.
  /// Throws ParseError on malformed input.
  static WeightedSosCertificate from_json(const nlohmann::json& j);
};

/// Recomputes hermiticity, exact PSD-ness and the re-expansion identity.
bool verify_certificate(const WeightedSosCertificate& cert, const Element& c, const std::vector<Element>& f);

struct NumericSolution {
  bool candidate = false;
  std::vector<double> point;
  SolveSummary summary;
};

/// Runs the margin schedule until an affine-feasible candidate with a PSD
/// margin is found, or infeasibility evidence / the iteration cap is hit.
NumericSolution solve_feasibility(const SdpProblem& p, const SolverOptions& opts);
/// Rounds a candidate and returns a certificate only if it verifies exactly.
std::optional<WeightedSosCertificate> round_and_verify(const NumericSolution& sol, const SdpProblem& p,
                                                       const SolverOptions& opts);

struct FeasibilityReport {
  SolveSummary summary;
  std::optional<WeightedSosCertificate> certificate;  // present iff status is Certificate

  FeasibilityStatus status() const { return summary.status; }
  nlohmann::json to_json() const;
};

/// Full pipeline: solve, round, verify. Certificates are emitted only after
/// verify_certificate succeeds.
FeasibilityReport find_certificate(const SdpProblem& p, const SolverOptions& opts);
inline FeasibilityReport find_certificate(const Element& c, const std::vector<Element>& f, unsigned degree,
                                          const SolverOptions& opts = {}) {
  return find_certificate(build_gram_problem(c, f, degree), opts);
}

// ---------------------------------------------------------------------------
// Commutative mode: (t_1^2 + ... + t_d^2)^level * p as a sum of squares.

struct CommutativeCertificate {
  CommutativePoly polynomial;  // p
  unsigned level = 0;
  std::vector<CommutativePoly> basis;
  QMatrix gram;

  /// (sum t^2)^level * p
  CommutativePoly target() const;
  nlohmann::json to_json() const;
  static CommutativeCertificate from_json(const nlohmann::json& j);
};

bool verify_commutative_certificate(const CommutativeCertificate& cert, const CommutativePoly& p);

enum class CommutativeVerdict { Certificate, NotPositive, InfeasibleEvidence, Inconclusive };
std::string to_string(CommutativeVerdict v);

struct CommutativeReport {
  CommutativeVerdict verdict = CommutativeVerdict::Inconclusive;
  unsigned level = 0;
  SolveSummary summary;
  std::optional<CommutativeCertificate> certificate;
  std::optional<std::vector<Rational>> negative_point;  // when NotPositive
  std::vector<std::vector<Rational>> zeros;             // sampled zeros used for facial reduction

  nlohmann::json to_json() const;
};

/// Sampling on the grid {-radius..radius}^d first: a negative value means no
/// certificate is attempted. Throws NotHomogeneous.
CommutativeReport commutative_sos(const CommutativePoly& p, unsigned level, const SolverOptions& opts = {});

/// First grid point with p(t) < 0, if any.
std::optional<std::vector<Rational>> sample_negative(const CommutativePoly& p, int radius = 2);
/// Nonzero grid points with p(t) = 0.
std::vector<std::vector<Rational>> sample_zeros(const CommutativePoly& p, int radius = 2);

/// Parses "t1^2 - 3/4*t2" style text in `nvars` variables.
CommutativePoly parse_commutative(const std::string& text, std::size_t nvars);

}  // namespace envsos
