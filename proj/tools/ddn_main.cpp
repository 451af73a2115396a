#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "ddn/corpus.hpp"
#include "ddn/parser.hpp"

using namespace ddn;

namespace {

struct Options {
  std::uint64_t seed = 0;
  int samples = 8;
  long precision = 128;
  double tolerance = 1e-25;
  std::string ranking;  // empty: use the problem file's choice
  std::string format = "text";
  bool parallel = false;

  SampleConfig sample_config() const {
    SampleConfig cfg;
    cfg.seed = seed;
    cfg.samples = samples;
    cfg.precision = precision;
    cfg.tolerance = tolerance;
    return cfg;
  }
};

class Reporter {
 public:
  explicit Reporter(const std::string& format) : kv_(format == "kv") {}

  void line(const std::vector<std::pair<std::string, std::string>>& fields,
            const std::string& human) {
    if (kv_) {
      bool first = true;
      for (const auto& [k, v] : fields) {
        if (!first) std::cout << ' ';
        std::cout << k << '=' << v;
        first = false;
      }
      std::cout << '\n';
    } else {
      std::cout << human << '\n';
    }
  }

  void note(const std::string& human) {
    if (!kv_) std::cout << human << '\n';
  }

 private:
  bool kv_;
};

std::string verdict_str(bool pass) { return pass ? "pass" : "fail"; }

Problem load_problem(const std::string& path, const Options& opt) {
  Problem p = parse_problem_file(path);
  if (!opt.ranking.empty()) {
    if (opt.ranking == "default")
      p.ranking = Ranking::total_order();
    else if (opt.ranking == "deriv-major")
      p.ranking = Ranking::deriv_major();
    else if (opt.ranking == "shift-major")
      p.ranking = Ranking::shift_major();
    else
      fail(ErrorKind::SyntaxError, "unknown ranking '" + opt.ranking + "'");
  }
  return p;
}

int run_el(const std::string& file, const std::string& var, const Options& opt) {
  Problem p = load_problem(file, opt);
  Lagrangian L = p.lagrangian_or_fail();
  Reporter rep(opt.format);
  for (int alpha = 0; alpha < p.sig.q(); ++alpha) {
    if (!var.empty() && p.sig.dependent[alpha] != var) continue;
    Expr el = euler_lagrange(L.density, alpha, p.sig);
    rep.line({{"check", "el"},
              {"var", p.sig.dependent[alpha]},
              {"expr", to_string(el, p.sig)}},
             "E_" + p.sig.dependent[alpha] + "(L) = " + to_string(el, p.sig));
  }
  return 0;
}

int run_divtest(const std::string& file, const std::string& expr_text, const Options& opt) {
  Problem p = load_problem(file, opt);
  Expr e = parse_expr(expr_text, p.sig);
  auto v = is_divergence(e, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  std::string verdict = to_string(v.verdict);
  std::string witness =
      v.failing_alpha ? p.sig.dependent[*v.failing_alpha] : std::string("-");
  rep.line({{"check", "divtest"}, {"verdict", verdict}, {"witness", witness}},
           "divergence test: " + verdict +
               (v.failing_alpha ? " (E_" + witness + " does not vanish)" : ""));
  return v.verdict == ZeroVerdict::No ? 1 : 0;
}

int run_adjoint(const std::string& file, const std::string& op_text, const Options& opt) {
  Problem p = load_problem(file, opt);
  LinearDDOperator op = parse_operator(op_text, p.sig);
  LinearDDOperator adj = op_adjoint(op, p.sig);
  Reporter rep(opt.format);
  rep.line({{"check", "adjoint"}, {"op", to_string(adj, p.sig)}},
           "adjoint: " + to_string(adj, p.sig));
  return 0;
}

int run_lsc(const std::string& file, const std::string& gen_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  if (p.system.empty()) fail(ErrorKind::SyntaxError, "problem declares no system");
  SolvedSystem solved = p.solve();
  Reporter rep(opt.format);
  bool all = true;
  auto run_one = [&](const std::string& name, const Generator& g) {
    LscReport r = lsc_check(p.system, solved, g, p.sig, opt.sample_config());
    bool pass = r.pass();
    all = all && pass;
    std::string structure =
        r.structure.kind == StructureResult::Kind::PreservesFull ? "full" : "reduced";
    for (size_t l = 0; l < r.per_equation.size(); ++l)
      rep.line({{"check", "lsc"},
                {"generator", name},
                {"eq", std::to_string(l + 1)},
                {"structure", structure},
                {"verdict", verdict_str(r.per_equation[l].affirmative())}},
               "lsc " + name + " eq " + std::to_string(l + 1) + ": " +
                   verdict_str(r.per_equation[l].affirmative()) + " (" + structure +
                   " prolongation structure)");
  };
  for (const auto& [name, g] : p.generators)
    if (gen_name.empty() || gen_name == name) run_one(name, g);
  if (!gen_name.empty() && !p.find_generator(gen_name)) {
    if (const Characteristic* q = p.find_characteristic(gen_name))
      run_one(gen_name, Generator::evolutionary(*q, p.sig));
    else
      fail(ErrorKind::UndeclaredSymbol, "no generator or characteristic '" + gen_name + "'");
  }
  return all ? 0 : 1;
}

int run_varsym(const std::string& file, const std::string& q_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  Lagrangian L = p.lagrangian_or_fail();
  Reporter rep(opt.format);
  bool all = true;
  for (const auto& [name, q] : p.characteristics) {
    if (!q_name.empty() && q_name != name) continue;
    VarsymReport r = varsym_check(L, q, p.sig, opt.sample_config());
    all = all && r.pass();
    rep.line({{"check", "varsym"}, {"characteristic", name}, {"verdict", verdict_str(r.pass())}},
             "varsym " + name + ": " + verdict_str(r.pass()));
  }
  return all ? 0 : 1;
}

int run_noether1(const std::string& file, const std::string& q_name, const std::string& pf,
                 const std::string& pg, const Options& opt) {
  Problem p = load_problem(file, opt);
  Lagrangian L = p.lagrangian_or_fail();
  const Characteristic* q = p.find_characteristic(q_name);
  if (!q) fail(ErrorKind::UndeclaredSymbol, "no characteristic '" + q_name + "'");
  std::optional<DivComponents> P;
  if (!pf.empty() || !pg.empty()) {
    DivComponents comp = DivComponents::zeros(p.sig);
    if (!pf.empty()) {
      ExprList fs;
      for (const auto& piece : {pf}) {
        std::istringstream ss(piece);
        std::string item;
        size_t i = 0;
        while (std::getline(ss, item, ';')) comp.F.at(i++) = parse_expr(item, p.sig);
      }
      (void)fs;
    }
    if (!pg.empty()) {
      std::istringstream ss(pg);
      std::string item;
      size_t i = 0;
      while (std::getline(ss, item, ';')) comp.G.at(i++) = parse_expr(item, p.sig);
    }
    P = comp;
  }
  NoetherClaw nc = noether_claw(L, *q, p.sig, opt.sample_config(), P);
  Reporter rep(opt.format);
  rep.line({{"check", "noether1"}, {"density", to_string(nc.claw.density, p.sig)}},
           "density: " + to_string(nc.claw.density, p.sig));
  for (int i = 0; i < p.sig.p(); ++i)
    rep.line({{"component", "F" + std::to_string(i + 1)},
              {"expr", to_string(nc.claw.components.F[i], p.sig)}},
             "F" + std::to_string(i + 1) + " = " + to_string(nc.claw.components.F[i], p.sig));
  for (int i = 0; i < p.sig.m(); ++i)
    rep.line({{"component", "G" + std::to_string(i + 1)},
              {"expr", to_string(nc.claw.components.G[i], p.sig)}},
             "G" + std::to_string(i + 1) + " = " + to_string(nc.claw.components.G[i], p.sig));
  SolvedSystem solved = p.solve();
  ClawReport cr = verify_claw(nc.claw, solved, p.sig, opt.sample_config());
  rep.line({{"check", "noether1-verify"}, {"verdict", verdict_str(cr.pass())}},
           "verification: " + std::string(verdict_str(cr.pass())));
  return cr.pass() ? 0 : 1;
}

int run_noether2(const std::string& file, const std::string& q_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  Lagrangian L = p.lagrangian_or_fail();
  const Characteristic* q = p.find_characteristic(q_name);
  if (!q) fail(ErrorKind::UndeclaredSymbol, "no characteristic '" + q_name + "'");
  Noether2Result res = noether2_relations(L, *q, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  for (size_t i = 0; i < res.certificates.size(); ++i) {
    const std::string fname = p.sig.arbitrary[res.function_indices[i]].name;
    const RelationCertificate& cert = res.certificates[i];
    std::string pretty;
    for (size_t a = 0; a < cert.ops.size(); ++a) {
      if (cert.ops[a].terms.empty()) continue;
      if (!pretty.empty()) pretty += " + ";
      pretty += "[" + to_string(cert.ops[a], p.sig) + "](" + cert.target_labels[a] + ")";
    }
    rep.line({{"check", "noether2"},
              {"function", fname},
              {"verdict", verdict_str(res.verified[i].affirmative())},
              {"relation", pretty}},
             "relation for " + fname + ": " + pretty + " == 0  [" +
                 to_string(res.verified[i].verdict) + "]");
  }
  return res.pass() ? 0 : 1;
}

int run_intermediate(const std::string& file, const std::string& q_name,
                     const std::string& lam_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  Lagrangian L = p.lagrangian_or_fail();
  const Characteristic* q = p.find_characteristic(q_name);
  if (!q) fail(ErrorKind::UndeclaredSymbol, "no characteristic '" + q_name + "'");
  if (!p.constraints) fail(ErrorKind::SyntaxError, "problem declares no constraints");
  const ExprList* lam = p.find_multiplier(lam_name);
  if (!lam) fail(ErrorKind::UndeclaredSymbol, "no multiplier '" + lam_name + "'");
  auto res = intermediate_determining(L, *q, *p.constraints, *lam, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  for (size_t r = 0; r < res.per_function.size(); ++r) {
    const std::string fname =
        p.sig.arbitrary[p.constraints->function_index(static_cast<int>(r))].name;
    rep.line({{"check", "intermediate"},
              {"function", fname},
              {"verdict", verdict_str(res.per_function[r].affirmative())}},
             "determining equation for " + fname + ": " +
                 verdict_str(res.per_function[r].affirmative()));
  }
  if (res.pass()) {
    ConservationLaw claw = constrained_claw(*p.constraints, *lam, std::nullopt, p.sig);
    for (int i = 0; i < p.sig.p(); ++i)
      rep.line({{"component", "F" + std::to_string(i + 1)},
                {"expr", to_string(claw.components.F[i], p.sig)}},
               "F" + std::to_string(i + 1) + " = " + to_string(claw.components.F[i], p.sig));
    for (int i = 0; i < p.sig.m(); ++i)
      rep.line({{"component", "G" + std::to_string(i + 1)},
                {"expr", to_string(claw.components.G[i], p.sig)}},
               "G" + std::to_string(i + 1) + " = " + to_string(claw.components.G[i], p.sig));
  }
  return res.pass() ? 0 : 1;
}

int run_relation(const std::string& file, const std::string& cert_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  const RelationCertificate* cert = p.find_certificate(cert_name);
  if (!cert) fail(ErrorKind::UndeclaredSymbol, "no certificate '" + cert_name + "'");
  ZeroResult r = relation_verify(*cert, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  rep.line({{"check", "relation"},
            {"certificate", cert_name},
            {"verdict", verdict_str(r.affirmative())},
            {"strength", to_string(r.verdict)}},
           "relation " + cert_name + ": " + verdict_str(r.affirmative()) + " (" +
               to_string(r.verdict) + ")");
  return r.affirmative() ? 0 : 1;
}

int run_claw_verify(const std::string& file, const std::string& claw_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  const ConservationLaw* claw = p.find_claw(claw_name);
  if (!claw) fail(ErrorKind::UndeclaredSymbol, "no claw '" + claw_name + "'");
  SolvedSystem solved = p.solve();
  ClawReport r = verify_claw(*claw, solved, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  rep.line({{"check", "claw-verify"},
            {"claw", claw_name},
            {"components", verdict_str(r.components_match.affirmative())},
            {"on-solutions", verdict_str(r.vanishes_on_solutions.affirmative())}},
           "claw " + claw_name + ": components " +
               verdict_str(r.components_match.affirmative()) + ", on-solutions " +
               verdict_str(r.vanishes_on_solutions.affirmative()));
  return r.pass() ? 0 : 1;
}

int run_trivial(const std::string& file, const std::string& claw_name, const Options& opt) {
  Problem p = load_problem(file, opt);
  const ConservationLaw* claw = p.find_claw(claw_name);
  if (!claw) fail(ErrorKind::UndeclaredSymbol, "no claw '" + claw_name + "'");
  SolvedSystem solved = p.solve();
  Triviality t = triviality_check(*claw, solved, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  bool trivial = t == Triviality::Trivial;
  rep.line({{"check", "trivial"},
            {"claw", claw_name},
            {"verdict", trivial ? "trivial" : "not-shown-trivial"}},
           "claw " + claw_name + ": " + (trivial ? "trivial" : "not shown trivial"));
  return 0;
}

int run_ansatz(const std::string& file, const std::string& basis_text, bool system_mode,
               const Options& opt) {
  Problem p = load_problem(file, opt);
  std::vector<Characteristic> basis;
  {
    std::istringstream ss(basis_text);
    std::string item;
    while (std::getline(ss, item, ';')) {
      ExprList comps;
      std::string piece;
      std::istringstream ss2(item);
      int depth = 0;
      std::string cur;
      for (char c : item) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
          comps.push_back(parse_expr(cur, p.sig));
          cur.clear();
        } else {
          cur.push_back(c);
        }
      }
      if (!cur.empty()) comps.push_back(parse_expr(cur, p.sig));
      if (static_cast<int>(comps.size()) != p.sig.q())
        fail(ErrorKind::ArityError, "ansatz basis element arity mismatch");
      basis.push_back(Characteristic{std::move(comps)});
    }
  }
  AnsatzProblem prob = (!system_mode && p.lagrangian)
                           ? AnsatzProblem::variational(p.lagrangian_or_fail())
                           : AnsatzProblem::for_system(p.system, p.solve());
  auto found = ansatz_solve(prob, basis, p.sig, opt.sample_config());
  Reporter rep(opt.format);
  rep.line({{"check", "ansatz"}, {"dimension", std::to_string(found.size())}},
           "verified solution space dimension: " + std::to_string(found.size()));
  for (size_t i = 0; i < found.size(); ++i) {
    std::string qs;
    for (size_t a = 0; a < found[i].Q.size(); ++a) {
      if (a) qs += ", ";
      qs += to_string(found[i].Q[a], p.sig);
    }
    rep.line({{"solution", std::to_string(i + 1)}, {"Q", qs}},
             "Q" + std::to_string(i + 1) + " = (" + qs + ")");
  }
  return 0;
}

int run_corpus_cmd(const std::string& fixture, const Options& opt) {
  Reporter rep(opt.format);
  std::vector<FixtureResult> results;
  if (fixture.empty()) {
    results = run_corpus(opt.sample_config(), opt.parallel);
  } else {
    results.push_back(run_corpus_fixture(fixture, opt.sample_config()));
  }
  bool all = true;
  for (const auto& f : results) {
    for (const auto& c : f.checks) {
      all = all && c.pass;
      rep.line({{"check", "corpus"},
                {"fixture", f.fixture},
                {"name", c.name},
                {"verdict", verdict_str(c.pass)}},
               "[" + std::string(c.pass ? "pass" : "FAIL") + "] " + f.fixture + ": " + c.name +
                   (c.detail.empty() ? "" : " (" + c.detail + ")"));
    }
  }
  rep.note(all ? "corpus: all checks passed" : "corpus: FAILURES present");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ddn - differential-difference variational calculus"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--seed", opt.seed, "sampling seed");
  app.add_option("--samples", opt.samples, "sample points for identity testing");
  app.add_option("--precision", opt.precision, "working precision in bits");
  app.add_option("--tolerance", opt.tolerance, "relative tolerance for sampled residuals");
  app.add_option("--ranking", opt.ranking, "default | deriv-major | shift-major");
  app.add_option("--format", opt.format, "text | kv")
      ->check(CLI::IsMember({"text", "kv"}));
  app.add_flag("--parallel", opt.parallel, "run corpus fixtures concurrently");

  std::string file, var, expr_text, op_text, gen, qname, lam, cert, claw, basis, pf, pg, fixture;
  bool system_mode = false;

  auto* el = app.add_subcommand("el", "Euler-Lagrange equations of the Lagrangian");
  el->add_option("file", file)->required();
  el->add_option("--var", var, "restrict to one dependent variable");

  auto* divtest = app.add_subcommand("divtest", "test an expression for divergence form");
  divtest->add_option("file", file)->required();
  divtest->add_option("--expr", expr_text)->required();

  auto* adjoint = app.add_subcommand("adjoint", "formal adjoint of an operator");
  adjoint->add_option("file", file)->required();
  adjoint->add_option("--op", op_text)->required();

  auto* lsc = app.add_subcommand("lsc", "linearized symmetry condition");
  lsc->add_option("file", file)->required();
  lsc->add_option("--generator", gen, "generator or characteristic name (default: all)");

  auto* varsym = app.add_subcommand("varsym", "variational symmetry check");
  varsym->add_option("file", file)->required();
  varsym->add_option("--characteristic", qname, "characteristic name (default: all)");

  auto* n1 = app.add_subcommand("noether1", "conservation law from a variational symmetry");
  n1->add_option("file", file)->required();
  n1->add_option("--characteristic", qname)->required();
  n1->add_option("--PF", pf, "';'-separated F components of pr v_Q(L)");
  n1->add_option("--PG", pg, "';'-separated G components of pr v_Q(L)");

  auto* n2 = app.add_subcommand("noether2", "second-theorem relations for a gauge symmetry");
  n2->add_option("file", file)->required();
  n2->add_option("--characteristic", qname)->required();

  auto* inter = app.add_subcommand("intermediate", "constrained-symmetry determining equations");
  inter->add_option("file", file)->required();
  inter->add_option("--characteristic", qname)->required();
  inter->add_option("--multiplier", lam)->required();

  auto* relation = app.add_subcommand("relation", "verify a syzygy certificate");
  relation->add_option("file", file)->required();
  relation->add_option("--certificate", cert)->required();

  auto* cv = app.add_subcommand("claw-verify", "verify a conservation law");
  cv->add_option("file", file)->required();
  cv->add_option("--claw", claw)->required();

  auto* trivial = app.add_subcommand("trivial", "triviality check for a conservation law");
  trivial->add_option("file", file)->required();
  trivial->add_option("--claw", claw)->required();

  auto* ansatz = app.add_subcommand("ansatz", "solve for symmetries over a linear ansatz");
  ansatz->add_option("file", file)->required();
  ansatz->add_option("--basis", basis, "';'-separated characteristics (',' between components)")
      ->required();
  ansatz->add_flag("--system-mode", system_mode, "use the LSC even when a Lagrangian exists");

  auto* corpus = app.add_subcommand("corpus", "run the built-in fixture suite");
  corpus->add_option("--fixture", fixture, "run a single fixture");

  // Global options remain valid after the subcommand name.
  for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (el->parsed()) return run_el(file, var, opt);
    if (divtest->parsed()) return run_divtest(file, expr_text, opt);
    if (adjoint->parsed()) return run_adjoint(file, op_text, opt);
    if (lsc->parsed()) return run_lsc(file, gen, opt);
    if (varsym->parsed()) return run_varsym(file, qname, opt);
    if (n1->parsed()) return run_noether1(file, qname, pf, pg, opt);
    if (n2->parsed()) return run_noether2(file, qname, opt);
    if (inter->parsed()) return run_intermediate(file, qname, lam, opt);
    if (relation->parsed()) return run_relation(file, cert, opt);
    if (cv->parsed()) return run_claw_verify(file, claw, opt);
    if (trivial->parsed()) return run_trivial(file, claw, opt);
    if (ansatz->parsed()) return run_ansatz(file, basis, system_mode, opt);
    if (corpus->parsed()) return run_corpus_cmd(fixture, opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
