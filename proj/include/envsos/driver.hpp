#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "envsos/pbw.hpp"
#include "envsos/representation.hpp"
#include "envsos/sos.hpp"

namespace envsos {

struct SearchCaps {
  unsigned n_max = 2;      // largest n in s = a^n (or index into the explicit list)
  unsigned d_max = 8;      // largest certificate degree D
  unsigned level_cap = 2;  // sphere multiplier levels tried for the symbol
  unsigned workers = 0;    // concurrent attempts; 0 = hardware threads. Not serialized:
                           // the transcript does not depend on it.

  nlohmann::json to_json() const;
};

/// Hypotheses of the strict Positivstellensatz plus search caps. The Ore
/// family is {a^n} unless explicit candidates s_0, s_1, ... are given.
struct TheoremInstance {
  AlgebraPtr algebra;
  Element c;
  std::vector<Element> f;
  Rational epsilon{1};
  std::optional<std::vector<Element>> ore_elements;
  SearchCaps caps;
  SolverOptions solver;
  std::optional<DualWindow> window;
  bool allow_evidence = true;  // accept window evidence for (i) without a proof
  bool attempt_proof = true;   // try a direct certificate for c - eps

  explicit TheoremInstance(Element target) : algebra(target.algebra()), c(std::move(target)) {}

  unsigned m() const;
  /// Throws OddDegreeTarget, InvalidInstance (degree 0, bad f, eps <= 0),
  /// NotHermitean, NonCentralA (powers of a non-central a).
  void validate() const;
  /// s_n of the Ore family.
  Element ore_element(unsigned n) const;
  unsigned ore_count() const;

  nlohmann::json to_json() const;
  /// {"algebra", "aliases"?, "c", "f"?, "epsilon"?, "ore_family"?, "caps"?,
  ///  "window"?, "solver"?, "allow_evidence"?}. Throws ParseError and parser errors.
  static TheoremInstance from_json(const nlohmann::json& j);
};

/// Default window: spins up to 3 for su2, the grid {-1,0,1}^d for small
/// abelian algebras, nothing otherwise.
std::optional<DualWindow> default_window(const AlgebraPtr& alg);
nlohmann::json window_to_json(const DualWindow& w);
DualWindow window_from_json(const nlohmann::json& j);

struct SymbolVerdict {
  enum class Kind { CertifiedPositive, Counterexample, NotStrictlyPositive, Inconclusive };
  Kind kind = Kind::Inconclusive;
  CommutativePoly symbol;
  unsigned degree = 0;
  std::optional<unsigned> level;
  std::optional<Rational> delta;  // symbol - delta*(sum t^2)^m was certified
  std::optional<std::vector<Rational>> point;
  std::optional<CommutativeCertificate> certificate;

  nlohmann::json to_json() const;
};
std::string to_string(SymbolVerdict::Kind k);

/// Strict positivity of the top-degree symbol on R^d \ {0}: grid sampling
/// for negative values and zeros, then SOS certificates for
/// (sum t^2)^k (symbol - delta (sum t^2)^m) for k <= level_cap.
SymbolVerdict check_assumption_ii(const Element& c, unsigned level_cap, const SolverOptions& opts = {});

struct AssumptionIEvidence {
  Rational epsilon;
  bool window_available = false;
  DualWindowResult scan;                     // K_f restricted to the window
  std::vector<std::string> checked;          // members where c - eps was tested
  std::map<std::string, Rational> failures;  // member -> negative witness value
  std::optional<FeasibilityReport> proof;    // direct attempt for c - eps

  bool evidence_passed() const { return window_available && failures.empty(); }
  bool proved() const { return proof && proof->status() == FeasibilityStatus::Certificate; }
  bool refuted() const { return !failures.empty(); }
  /// "proof", "evidence", "failed" or "unavailable".
  std::string label() const;
  nlohmann::json to_json() const;
};

/// (a) necessary check: dU_alpha(c - eps) >= 0 on K_f within the window;
/// (b) optional sufficient check: a certificate for c - eps in T_f.
AssumptionIEvidence check_assumption_i_evidence(const Element& c, const std::vector<Element>& f,
                                                const Rational& epsilon, const std::optional<DualWindow>& window,
                                                bool attempt_proof, const SolverOptions& opts = {});

/// sum_{k=0}^d x_k^* c x_k with x_0 = i*1.
Element reduce_odd(const Element& c);

struct SearchAttempt {
  unsigned n = 0;
  unsigned degree = 0;
  SolveSummary summary;
};

struct SearchTranscript {
  enum class Outcome { Found, Exhausted, AssumptionFailed };
  Outcome outcome = Outcome::Exhausted;
  nlohmann::json instance;
  SymbolVerdict assumption_ii;
  AssumptionIEvidence assumption_i;
  std::string refusal;
  std::vector<SearchAttempt> attempts;
  std::optional<unsigned> n, degree;
  std::optional<Element> s, target;
  std::optional<WeightedSosCertificate> certificate;

  nlohmann::json to_json() const;
};
std::string to_string(SearchTranscript::Outcome o);

/// Checks both assumptions, then tries (n, D) in lexicographic order with
/// target s^* c s (m even) or s^* reduce_odd(c) s (m odd). The first verified
/// certificate ends the search.
SearchTranscript search_certificate(const TheoremInstance& inst);

}  // namespace envsos
