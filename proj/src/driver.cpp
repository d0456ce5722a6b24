#include "envsos/driver.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "envsos/errors.hpp"
#include "envsos/expr.hpp"

namespace envsos {

namespace {

using nlohmann::json;

json point_json(const std::vector<Rational>& t) {
  json out = json::array();
  for (const auto& v : t) out.push_back(rational_to_json(v));
  return out;
}

std::vector<Rational> point_from_json(const json& j) {
  std::vector<Rational> out;
  for (const auto& v : j) out.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>()));
  return out;
}

Rational rational_field(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ParseError("expected a rational as \"p/q\" or an integer");
}

bool is_su2(const AlgebraPtr& alg) { return alg->same_as(Algebra(builtin("su2"))); }

unsigned even_ceiling(std::optional<unsigned> d) { return d ? *d + (*d % 2) : 0; }

}  // namespace

json SearchCaps::to_json() const { return {{"n_max", n_max}, {"d_max", d_max}, {"level_cap", level_cap}}; }

unsigned TheoremInstance::m() const { return c.degree().value_or(0) / 2; }

void TheoremInstance::validate() const {
  const auto deg = c.degree();
  if (!deg || *deg == 0)
    throw InvalidInstance("constant targets are degenerate for the theorem; check their sign directly");
  if (*deg % 2 != 0) throw OddDegreeTarget("c must have even degree 2m, got " + std::to_string(*deg));
  if (!c.is_hermitean()) throw NotHermitean("c = '" + render(c) + "' is not hermitean");
  for (const auto& g : f)
    if (!g.algebra()->same_as(*algebra)) throw AlgebraMismatch("generators and c differ in algebra");
  if (f.empty() || f.front() != Element::one(algebra)) throw InvalidInstance("the first generator must be the unit 1");
  for (const auto& g : f)
    if (!g.is_hermitean()) throw NotHermitean("generator '" + render(g) + "' is not hermitean");
  if (sgn(epsilon) <= 0) throw InvalidInstance("epsilon must be positive");
  if (ore_elements) {
    if (ore_elements->empty()) throw InvalidInstance("the explicit Ore family is empty");
    for (const auto& s : *ore_elements) {
      if (!s.algebra()->same_as(*algebra)) throw AlgebraMismatch("Ore candidate in a different algebra");
      if (s.is_zero()) throw InvalidInstance("Ore candidates must be nonzero");
    }
  } else if (!canonical_a(algebra).is_central()) {
    throw NonCentralA("a = '" + render(canonical_a(algebra)) + "' is not central in " + algebra->lie().label() +
                      ", so {a^n} is not known to be an Ore set; supply explicit candidates via ore_family");
  }
}

Element TheoremInstance::ore_element(unsigned n) const {
  if (ore_elements) return ore_elements->at(n);
  return canonical_a(algebra).pow(n);
}

unsigned TheoremInstance::ore_count() const {
  if (ore_elements) return static_cast<unsigned>(std::min<std::size_t>(ore_elements->size(), caps.n_max + 1));
  return caps.n_max + 1;
}

json TheoremInstance::to_json() const {
  json fj = json::array();
  for (const auto& g : f) fj.push_back(render(g));
  json ore = "powers_of_a";
  if (ore_elements) {
    ore = json::array();
    for (const auto& s : *ore_elements) ore.push_back(render(s));
  }
  return {{"algebra", lie_to_json(algebra->lie())},
          {"c", render(c)},
          {"f", fj},
          {"epsilon", rational_to_json(epsilon)},
          {"ore_family", ore},
          {"caps", caps.to_json()},
          {"window", window ? window_to_json(*window) : json()},
          {"solver", solver.to_json()},
          {"allow_evidence", allow_evidence},
          {"attempt_proof", attempt_proof}};
}

TheoremInstance TheoremInstance::from_json(const json& j) {
  try {
    const auto alg = make_algebra(envsos::validate(lie_spec_from_json(j.at("algebra"))));
    std::map<std::string, std::string> aliases;
    if (j.contains("aliases")) aliases = j.at("aliases").get<std::map<std::string, std::string>>();
    auto expr = [&](const json& v) { return parse(ExprSource{v.get<std::string>(), aliases}, alg); };

    TheoremInstance inst(expr(j.at("c")));
    inst.f.assign(1, Element::one(alg));
    if (j.contains("f")) {
      inst.f.clear();
      for (const auto& v : j.at("f")) inst.f.push_back(expr(v));
    }
    if (j.contains("epsilon")) inst.epsilon = rational_field(j.at("epsilon"));
    if (j.contains("ore_family") && j.at("ore_family").is_array()) {
      inst.ore_elements.emplace();
      for (const auto& v : j.at("ore_family")) inst.ore_elements->push_back(expr(v));
    } else if (j.contains("ore_family") && j.at("ore_family") != "powers_of_a") {
      throw ParseError("ore_family must be \"powers_of_a\" or a list of expressions");
    }
    if (j.contains("caps")) {
      const auto& cj = j.at("caps");
      inst.caps.n_max = cj.value("n_max", inst.caps.n_max);
      inst.caps.d_max = cj.value("d_max", inst.caps.d_max);
      inst.caps.level_cap = cj.value("level_cap", inst.caps.level_cap);
      inst.caps.workers = cj.value("workers", inst.caps.workers);
    }
    if (j.contains("solver")) {
      const auto& sj = j.at("solver");
      inst.solver.tol = sj.value("tol", inst.solver.tol);
      inst.solver.dual_tol = sj.value("dual_tol", inst.solver.dual_tol);
      inst.solver.max_block = sj.value("max_block", inst.solver.max_block);
      inst.solver.max_iterations = sj.value("max_iterations", inst.solver.max_iterations);
      inst.solver.margins = sj.value("margins", inst.solver.margins);
      inst.solver.rounding_bits = sj.value("rounding_bits", inst.solver.rounding_bits);
      inst.solver.seed = sj.value("seed", inst.solver.seed);
    }
    if (!j.contains("window"))
      inst.window = default_window(alg);
    else if (!j.at("window").is_null())
      inst.window = window_from_json(j.at("window"));
    inst.allow_evidence = j.value("allow_evidence", inst.allow_evidence);
    inst.attempt_proof = j.value("attempt_proof", inst.attempt_proof);
    return inst;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance JSON: ") + e.what());
  }
}

std::optional<DualWindow> default_window(const AlgebraPtr& alg) {
  if (is_su2(alg)) return DualWindow::spins(3);
  const std::size_t d = alg->dim();
  if (!alg->lie().is_abelian() || d > 3) return std::nullopt;
  std::vector<std::vector<Rational>> pts{{}};
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<std::vector<Rational>> next;
    for (const auto& p : pts)
      for (int v = -1; v <= 1; ++v) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return DualWindow::grid(std::move(pts));
}

json window_to_json(const DualWindow& w) {
  json pts = json::array();
  for (const auto& p : w.points) pts.push_back(point_json(p));
  return {{"lmax", w.lmax ? json(rational_to_json(*w.lmax)) : json()}, {"points", pts}};
}

DualWindow window_from_json(const json& j) {
  DualWindow w;
  if (j.contains("lmax") && !j.at("lmax").is_null()) w.lmax = rational_field(j.at("lmax"));
  if (j.contains("points"))
    for (const auto& p : j.at("points")) w.points.push_back(point_from_json(p));
  return w;
}

// ---------------------------------------------------------------------------

std::string to_string(SymbolVerdict::Kind k) {
  switch (k) {
    case SymbolVerdict::Kind::CertifiedPositive: return "certified-positive";
    case SymbolVerdict::Kind::Counterexample: return "counterexample";
    case SymbolVerdict::Kind::NotStrictlyPositive: return "not-strictly-positive";
    case SymbolVerdict::Kind::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

json SymbolVerdict::to_json() const {
  return {{"verdict", to_string(kind)},
          {"symbol", symbol.to_string()},
          {"degree", degree},
          {"level", level ? json(*level) : json()},
          {"delta", delta ? json(rational_to_json(*delta)) : json()},
          {"point", point ? point_json(*point) : json()},
          {"certificate", certificate ? certificate->to_json() : json()}};
}

SymbolVerdict check_assumption_ii(const Element& c, unsigned level_cap, const SolverOptions& opts) {
  const auto deg = c.degree();
  if (!deg || *deg == 0) throw InvalidInstance("the symbol of a constant is degenerate");
  if (*deg % 2 != 0) throw OddDegreeTarget("the symbol test needs even degree, got " + std::to_string(*deg));
  SymbolVerdict v;
  v.degree = *deg;
  v.symbol = c.principal_symbol(*deg);
  if (auto neg = sample_negative(v.symbol)) {
    v.kind = SymbolVerdict::Kind::Counterexample;
    v.point = std::move(neg);
    return v;
  }
  if (auto zeros = sample_zeros(v.symbol); !zeros.empty()) {
    v.kind = SymbolVerdict::Kind::NotStrictlyPositive;
    v.point = zeros.front();
    return v;
  }
  const std::size_t d = v.symbol.nvars();
  const auto sphere = CommutativePoly::sphere_power(d, *deg / 2);
  for (unsigned k = 0; k <= level_cap; ++k)
    for (const Rational& delta : {Rational(1, 8), Rational(1, 64), Rational(1, 1024)}) {
      const auto shifted = v.symbol - delta * sphere;
      if (shifted.is_zero()) continue;
      auto rep = commutative_sos(shifted, k, opts);
      if (rep.verdict != CommutativeVerdict::Certificate) continue;
      v.kind = SymbolVerdict::Kind::CertifiedPositive;
      v.level = k;
      v.delta = delta;
      v.certificate = std::move(rep.certificate);
      return v;
    }
  return v;
}

// ---------------------------------------------------------------------------

std::string AssumptionIEvidence::label() const {
  if (proved()) return "proof";
  if (refuted()) return "failed";
  if (evidence_passed()) return "evidence";
  return "unavailable";
}

json AssumptionIEvidence::to_json() const {
  json fails = json::object();
  for (const auto& [label, value] : failures) fails[label] = rational_to_json(value);
  return {{"label", label()},
          {"epsilon", rational_to_json(epsilon)},
          {"window", window_available ? scan.to_json() : json()},
          {"checked", checked},
          {"failures", fails},
          {"proof", proof ? proof->to_json() : json()}};
}

AssumptionIEvidence check_assumption_i_evidence(const Element& c, const std::vector<Element>& f,
                                                const Rational& epsilon, const std::optional<DualWindow>& window,
                                                bool attempt_proof, const SolverOptions& opts) {
  if (sgn(epsilon) <= 0) throw InvalidInstance("epsilon must be positive");
  AssumptionIEvidence ev;
  ev.epsilon = epsilon;
  const Element shifted = c - Element::constant(c.algebra(), Scalar(epsilon));
  if (window) {
    ev.window_available = true;
    ev.scan = scan_dual_window(f, *window);
    for (const auto& [name, rep] : window_representations(c.algebra(), *window)) {
      if (!ev.scan.is_member(name)) continue;
      ev.checked.push_back(name);
      const auto verdict = is_positive(rep, shifted);
      if (!verdict.positive) ev.failures.emplace(name, verdict.witness_value);
    }
  }
  if (attempt_proof) ev.proof = find_certificate(shifted, f, even_ceiling(shifted.degree()), opts);
  return ev;
}

Element reduce_odd(const Element& c) {
  Element out = c;  // x_0^* c x_0 = c
  for (std::size_t k = 0; k < c.algebra()->dim(); ++k) {
    const auto x = Element::generator(c.algebra(), k);
    out += x.involution() * c * x;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(SearchTranscript::Outcome o) {
  switch (o) {
    case SearchTranscript::Outcome::Found: return "found";
    case SearchTranscript::Outcome::Exhausted: return "exhausted";
    case SearchTranscript::Outcome::AssumptionFailed: return "assumption-failed";
  }
  return "exhausted";
}

json SearchTranscript::to_json() const {
  json att = json::array();
  for (const auto& a : attempts) att.push_back({{"n", a.n}, {"D", a.degree}, {"status", to_string(a.summary.status)},
                                                {"solver", a.summary.to_json()}});
  return {{"schema_version", 1},
          {"outcome", to_string(outcome)},
          {"instance", instance},
          {"assumption_ii", assumption_ii.to_json()},
          {"assumption_i", assumption_i.to_json()},
          {"refusal", refusal.empty() ? json() : json(refusal)},
          {"attempts", att},
          {"n", n ? json(*n) : json()},
          {"D", degree ? json(*degree) : json()},
          {"s", s ? json(render(*s)) : json()},
          {"target", target ? json(render(*target)) : json()},
          {"certificate", certificate ? certificate->to_json() : json()}};
}

SearchTranscript search_certificate(const TheoremInstance& inst) {
  inst.validate();
  SearchTranscript tr;
  tr.instance = inst.to_json();
  tr.assumption_ii = check_assumption_ii(inst.c, inst.caps.level_cap, inst.solver);
  tr.assumption_i =
      check_assumption_i_evidence(inst.c, inst.f, inst.epsilon, inst.window, inst.attempt_proof, inst.solver);

  std::vector<std::string> reasons;
  using Kind = SymbolVerdict::Kind;
  if (tr.assumption_ii.kind == Kind::Counterexample) reasons.push_back("assumption (ii): the symbol is negative somewhere");
  if (tr.assumption_ii.kind == Kind::NotStrictlyPositive)
    reasons.push_back("assumption (ii): the symbol vanishes at a nonzero point");
  if (tr.assumption_i.refuted()) reasons.push_back("assumption (i): c - epsilon is not positive on K_f in the window");
  else if (!tr.assumption_i.proved() && !(inst.allow_evidence && tr.assumption_i.evidence_passed()))
    reasons.push_back("assumption (i): neither a proof nor accepted window evidence");
  if (!reasons.empty()) {
    tr.outcome = SearchTranscript::Outcome::AssumptionFailed;
    for (const auto& r : reasons) tr.refusal += (tr.refusal.empty() ? "" : "; ") + r;
    return tr;
  }

  const Element base = inst.m() % 2 == 0 ? inst.c : reduce_odd(inst.c);
  struct Job {
    unsigned n, d;
    Element s, target;
  };
  std::vector<Job> jobs;
  for (unsigned n = 0; n < inst.ore_count(); ++n) {
    Element s = inst.ore_element(n);
    Element target = s.involution() * base * s;
    for (unsigned d = even_ceiling(target.degree()); d <= inst.caps.d_max; d += 2) jobs.push_back({n, d, s, target});
  }

  // Waves of concurrent attempts; results are consumed in (n, D) order, so the
  // transcript is the one a sequential search would produce.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = inst.caps.workers == 0 ? hw : inst.caps.workers;
  for (std::size_t begin = 0; begin < jobs.size(); begin += workers) {
    const std::size_t end = std::min(jobs.size(), begin + workers);
    std::vector<std::future<FeasibilityReport>> wave;
    for (std::size_t k = begin; k < end; ++k)
      wave.push_back(std::async(end - begin > 1 ? std::launch::async : std::launch::deferred,
                                [&, k] { return find_certificate(jobs[k].target, inst.f, jobs[k].d, inst.solver); }));
    for (std::size_t k = begin; k < end; ++k) {
      auto rep = wave[k - begin].get();
      tr.attempts.push_back({jobs[k].n, jobs[k].d, rep.summary});
      if (rep.status() != FeasibilityStatus::Certificate) continue;
      tr.outcome = SearchTranscript::Outcome::Found;
      tr.n = jobs[k].n;
      tr.degree = jobs[k].d;
      tr.s = jobs[k].s;
      tr.target = jobs[k].target;
      tr.certificate = std::move(rep.certificate);
      return tr;
    }
  }
  tr.outcome = SearchTranscript::Outcome::Exhausted;
  return tr;
}

}  // namespace envsos
