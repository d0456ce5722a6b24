// envsos: command-line front end for the enveloping-algebra SOS toolkit.
// Exit codes: 0 success/valid, 1 legitimate negative outcome, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "envsos/audit.hpp"
#include "envsos/driver.hpp"
#include "envsos/errors.hpp"
#include "envsos/expr.hpp"
#include "envsos/representation.hpp"
#include "envsos/sos.hpp"

namespace {

using nlohmann::json;
using namespace envsos;

constexpr int kSchemaVersion = 1;

struct Common {
  std::string algebra = "su2";
  std::vector<std::string> aliases;
  std::string out;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInstance("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError("malformed JSON in " + what + ": " + e.what());
  }
}

/// A builtin name, a path to an algebra JSON file, or inline JSON.
json algebra_ref(const std::string& ref) {
  if (!ref.empty() && ref.front() == '{') return parse_json_text(ref, "--algebra");
  if (std::filesystem::exists(ref)) return parse_json_text(read_file(ref), ref);
  return json{{"builtin", ref}};
}

AlgebraPtr load_algebra(const std::string& ref) { return make_algebra(validate(lie_spec_from_json(algebra_ref(ref)))); }

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.seed = c.seed;
  return o;
}

void emit(const Common& c, json result) {
  const std::string text = result.dump(2) + "\n";
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidInstance("cannot write '" + c.out + "'");
  f << text;
}

json envelope(const std::string& command, json run_config, json result) {
  json j{{"schema_version", kSchemaVersion}, {"command", command}, {"run_config", std::move(run_config)}};
  j.update(result);
  return j;
}

json common_config(const Common& c) {
  return {{"algebra", c.algebra}, {"aliases", c.aliases}, {"tol", c.tol}, {"seed", c.seed}};
}

void add_common(CLI::App* cmd, Common& c, bool solver) {
  cmd->add_option("--algebra", c.algebra, "builtin name, algebra JSON file, or inline JSON")->capture_default_str();
  cmd->add_option("--alias", c.aliases, "NAME=EXPR alias, repeatable");
  cmd->add_option("--out", c.out, "write the JSON result here instead of stdout");
  if (solver) {
    cmd->add_option("--tol", c.tol, "numeric tolerance")->capture_default_str();
    cmd->add_option("--seed", c.seed, "solver seed")->capture_default_str();
  }
}

std::vector<Element> parse_all(const std::vector<std::string>& texts, const ExprSource& base, const AlgebraPtr& alg) {
  std::vector<Element> out;
  for (const auto& t : texts) out.push_back(parse(ExprSource{t, base.aliases}, alg));
  return out;
}

// ---------------------------------------------------------------------------

struct NormalizeArgs {
  Common c;
  std::string expr;
};

int run_normalize(const NormalizeArgs& a) {
  const auto alg = load_algebra(a.c.algebra);
  const auto e = parse(ExprSource{a.expr, parse_alias_list(a.c.aliases)}, alg);
  json cfg = common_config(a.c);
  cfg["expr"] = a.expr;
  emit(a.c, envelope("normalize", cfg,
                     {{"normal_form", render(e)}, {"degree", e.degree() ? json(*e.degree()) : json()},
                      {"hermitean", e.is_hermitean()}}));
  return 0;
}

struct ScanArgs {
  Common c;
  std::vector<std::string> exprs{"1"};
  std::string lmax = "3";
  std::vector<std::string> points;
};

int run_scan(const ScanArgs& a) {
  const auto alg = load_algebra(a.c.algebra);
  const ExprSource base{"", parse_alias_list(a.c.aliases)};
  const auto f = parse_all(a.exprs, base, alg);
  DualWindow w;
  if (a.points.empty()) {
    w = DualWindow::spins(parse_rational(a.lmax));
  } else {
    for (const auto& p : a.points) {
      std::vector<Rational> t;
      std::stringstream ss(p);
      for (std::string part; std::getline(ss, part, ',');) t.push_back(parse_rational(part));
      w.points.push_back(std::move(t));
    }
  }
  const auto res = scan_dual_window(f, w);
  json cfg = common_config(a.c);
  cfg["exprs"] = a.exprs;
  cfg["lmax"] = a.points.empty() ? json(a.lmax) : json();
  cfg["points"] = a.points;
  emit(a.c, envelope("scan", cfg, res.to_json()));
  return 0;
}

struct SosArgs {
  Common c;
  std::string expr;
  std::vector<std::string> exprs{"1"};
  unsigned degree = 2;
  std::string instance;
  bool commutative = false;
  std::size_t nvars = 0;
  unsigned level = 0;
};

int run_sos(SosArgs a) {
  const auto opts = solver_options(a.c);
  json cfg = common_config(a.c);
  if (a.commutative) {
    if (a.nvars == 0) throw InvalidInstance("--commutative needs --nvars");
    const auto p = parse_commutative(a.expr, a.nvars);
    const auto rep = commutative_sos(p, a.level, opts);
    cfg.update({{"expr", a.expr}, {"nvars", a.nvars}, {"level", a.level}, {"commutative", true}});
    emit(a.c, envelope("sos", cfg, rep.to_json()));
    return rep.verdict == CommutativeVerdict::Certificate ? 0 : 1;
  }
  std::map<std::string, std::string> aliases = parse_alias_list(a.c.aliases);
  if (!a.instance.empty()) {
    // {"algebra", "aliases"?, "c", "f"?, "degree"}
    const auto j = parse_json_text(read_file(a.instance), a.instance);
    try {
      a.c.algebra = j.at("algebra").dump();
      a.expr = j.at("c").get<std::string>();
      if (j.contains("f")) a.exprs = j.at("f").get<std::vector<std::string>>();
      if (j.contains("aliases"))
        for (const auto& [k, v] : j.at("aliases").items()) aliases[k] = v.get<std::string>();
      a.degree = j.at("degree").get<unsigned>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed sos instance: ") + e.what());
    }
    cfg["instance"] = a.instance;
  }
  if (a.expr.empty()) throw InvalidInstance("sos needs --expr or --instance");
  const auto alg = load_algebra(a.c.algebra);
  const ExprSource base{"", aliases};
  const auto c = parse(ExprSource{a.expr, aliases}, alg);
  const auto f = parse_all(a.exprs, base, alg);
  const auto rep = find_certificate(c, f, a.degree, opts);
  cfg.update({{"expr", a.expr}, {"exprs", a.exprs}, {"degree", a.degree}, {"solver", opts.to_json()}});
  emit(a.c, envelope("sos", cfg, {{"status", to_string(rep.status())}, {"solver", rep.summary.to_json()},
                                  {"certificate", rep.certificate ? rep.certificate->to_json() : json()}}));
  return rep.status() == FeasibilityStatus::Certificate ? 0 : 1;
}

struct TheoremArgs {
  Common c;
  std::string instance;
  std::optional<unsigned> nmax, dmax, level_cap, workers;
  std::optional<std::string> epsilon, lmax;
  std::optional<bool> allow_evidence;
};

int run_theorem(const TheoremArgs& a) {
  auto j = parse_json_text(read_file(a.instance), a.instance);
  if (a.nmax) j["caps"]["n_max"] = *a.nmax;
  if (a.dmax) j["caps"]["d_max"] = *a.dmax;
  if (a.level_cap) j["caps"]["level_cap"] = *a.level_cap;
  if (a.workers) j["caps"]["workers"] = *a.workers;
  if (a.epsilon) j["epsilon"] = *a.epsilon;
  if (a.lmax) j["window"] = {{"lmax", *a.lmax}};
  if (a.allow_evidence) j["allow_evidence"] = *a.allow_evidence;
  j["solver"]["seed"] = a.c.seed;
  j["solver"]["tol"] = a.c.tol;
  const auto inst = TheoremInstance::from_json(j);
  std::cerr << "theorem: searching n <= " << inst.caps.n_max << ", D <= " << inst.caps.d_max << "\n";
  const auto tr = search_certificate(inst);
  json cfg = common_config(a.c);
  cfg["instance"] = a.instance;
  cfg["resolved_instance"] = inst.to_json();
  emit(a.c, envelope("theorem", cfg, {{"transcript", tr.to_json()}}));
  return tr.outcome == SearchTranscript::Outcome::Found ? 0 : 1;
}

struct AuditArgs {
  Common c;
  std::vector<std::string> contexts;
  std::vector<std::string> corrupt;
  unsigned ideal_level = 1;
};

int run_audit(const AuditArgs& a) {
  const auto alg = load_algebra(a.c.algebra);
  // Tampered "claimed" constants feed only the right-hand sides.
  LieAlgebraSpec claimed = alg->lie().spec();
  for (const auto& item : a.corrupt) {
    const auto eq = item.find('=');
    std::vector<std::size_t> idx;
    std::stringstream ss(item.substr(0, eq));
    for (std::string part; std::getline(ss, part, ',');) idx.push_back(std::stoul(part));
    if (eq == std::string::npos || idx.size() != 3 || idx[0] < 1 || idx[1] < 1 || idx[2] < 1 ||
        idx[0] > alg->dim() || idx[1] > alg->dim() || idx[2] > alg->dim())
      throw ParseError("--corrupt expects I,J,K=VALUE with 1-based indices");
    claimed.set_bracket(idx[0] - 1, idx[1] - 1, idx[2] - 1, parse_rational(item.substr(eq + 1)));
  }
  const auto comm = audit_cleared_commutator(alg, claimed);
  const auto deg2 = audit_cleared_degree2(alg, claimed);
  bool pass = comm.pass() && deg2.pass();
  json ctx = json::array();
  for (const auto& spec : a.contexts) {
    const auto report = audit_r_relations(OperatorAlgebraContext(parse_context(alg, spec)), a.ideal_level);
    pass = pass && report.pass();
    ctx.push_back(report.to_json());
  }
  json cfg = common_config(a.c);
  cfg.update({{"contexts", a.contexts}, {"corrupt", a.corrupt}, {"ideal_level", a.ideal_level}});
  emit(a.c, envelope("audit", cfg,
                     {{"status", pass ? "pass" : "fail"}, {"yxk1", comm.to_json()}, {"yxk2", deg2.to_json()},
                      {"contexts", ctx}}));
  return pass ? 0 : 1;
}

struct VerifyArgs {
  Common c;
  std::string path;
};

int run_verify(const VerifyArgs& a) {
  const auto j = parse_json_text(read_file(a.path), a.path);
  bool valid = false;
  std::string mode;
  try {
    mode = j.at("mode").get<std::string>();
  } catch (const json::exception&) {
    throw ParseError("certificate JSON lacks a mode");
  }
  if (mode == "commutative") {
    const auto cert = CommutativeCertificate::from_json(j);
    valid = verify_commutative_certificate(cert, cert.polynomial);
  } else {
    const auto cert = WeightedSosCertificate::from_json(j);
    valid = verify_certificate(cert, cert.target, cert.generators);
  }
  emit(a.c, envelope("verify", {{"certificate", a.path}}, {{"mode", mode}, {"valid", valid}}));
  return valid ? 0 : 1;
}

void report_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"schema_version", kSchemaVersion}, {"error", {{"kind", kind}, {"message", message}}}}.dump()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sums of squares and Positivstellensatz certificates in enveloping algebras"};
  app.require_subcommand(1);

  NormalizeArgs norm;
  auto* c_norm = app.add_subcommand("normalize", "PBW normal form of an expression");
  add_common(c_norm, norm.c, false);
  c_norm->add_option("--expr", norm.expr, "expression")->required();

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "which window representations lie in K_f");
  add_common(c_scan, scan.c, false);
  c_scan->add_option("--exprs", scan.exprs, "generators f (first must be 1)")->capture_default_str();
  c_scan->add_option("--lmax", scan.lmax, "largest spin (su2)")->capture_default_str();
  c_scan->add_option("--point", scan.points, "abelian point t1,t2,..., repeatable");

  SosArgs sos;
  auto* c_sos = app.add_subcommand("sos", "search a weighted SOS certificate for c in T_f");
  add_common(c_sos, sos.c, true);
  c_sos->add_option("--expr", sos.expr, "target c");
  c_sos->add_option("--exprs", sos.exprs, "generators f (first must be 1)")->capture_default_str();
  c_sos->add_option("--degree", sos.degree, "certificate degree D (even)")->capture_default_str();
  c_sos->add_option("--instance", sos.instance, "JSON file with algebra, c, f, degree");
  c_sos->add_flag("--commutative", sos.commutative, "commutative mode: (sum t^2)^level * p as SOS");
  c_sos->add_option("--nvars", sos.nvars, "number of commutative variables t1..td");
  c_sos->add_option("--level", sos.level, "sphere multiplier level")->capture_default_str();

  TheoremArgs thm;
  auto* c_thm = app.add_subcommand("theorem", "run the Positivstellensatz search on an instance file");
  add_common(c_thm, thm.c, true);
  c_thm->add_option("instance", thm.instance, "instance JSON")->required();
  c_thm->add_option("--nmax", thm.nmax, "largest n in s = a^n");
  c_thm->add_option("--dmax", thm.dmax, "largest certificate degree");
  c_thm->add_option("--level-cap", thm.level_cap, "sphere multiplier levels for the symbol");
  c_thm->add_option("--workers", thm.workers, "concurrent attempts (0 = hardware threads)");
  c_thm->add_option("--epsilon", thm.epsilon, "assumption (i) margin p/q");
  c_thm->add_option("--lmax", thm.lmax, "spin window for the evidence scan");
  c_thm->add_option("--allow-evidence", thm.allow_evidence, "accept window evidence for assumption (i)");

  AuditArgs audit;
  auto* c_audit = app.add_subcommand("audit", "audit the cleared identities and operator relations");
  add_common(c_audit, audit.c, false);
  c_audit->add_option("--context", audit.contexts, "'spins=1/2,1' or 'point=1,2', repeatable");
  c_audit->add_option("--corrupt", audit.corrupt, "I,J,K=VALUE: tamper with a claimed structure constant");
  c_audit->add_option("--ideal-level", audit.ideal_level, "word length bound for ideal membership")
      ->capture_default_str();

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "re-check a certificate exactly");
  c_ver->add_option("certificate", ver.path, "certificate JSON")->required();
  c_ver->add_option("--out", ver.c.out, "write the JSON result here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_norm) return run_normalize(norm);
    if (*c_scan) return run_scan(scan);
    if (*c_sos) return run_sos(sos);
    if (*c_thm) return run_theorem(thm);
    if (*c_audit) return run_audit(audit);
    if (*c_ver) return run_verify(ver);
  } catch (const PositionedSyntaxError& e) {
    std::cerr << json{{"schema_version", kSchemaVersion},
                      {"error", {{"kind", e.kind()}, {"message", e.what()}, {"position", e.position()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const Error& e) {
    report_error(e.kind(), e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error("InternalError", e.what());
    return 2;
  }
  return 2;
}
