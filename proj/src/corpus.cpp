#include "ddn/corpus.hpp"

#include <future>
#include <map>

namespace ddn {

namespace {

const std::string kVolterra = R"(# Modified Volterra lattice in potential form.
# The substitution u = 1/(v[0|1]-v[0|-1]) recovers u' = u^2 (u_1 - u_{-1}).
vars:
  continuous: x
  discrete: n
  dependent: v
  arbitrary: g1(x), g2(x), g(x,n)
ranking: default
lagrangian: v[0|-1]*v[1|0] - ln(v[0|2] - v)
characteristic Qgauge:
  g1 + alt(n)*g2
characteristic Qg:
  g
characteristic Qone:
  1
characteristic Qalt:
  alt(n)
characteristic Qbad:
  v
claw basic:
  F: v[0|1] - v[0|-1]
  G: 1/(v[0|1] - v[0|-1]) + 1/(v - v[0|-2])
  density: v[1|1] - v[1|-1] + 1/(v[0|2] - v) - 1/(v - v[0|-2])
claw alternating:
  F: alt(n)*(v[0|1] - v[0|-1])
  G: -alt(n)*(1/(v[0|1] - v[0|-1]) - 1/(v - v[0|-2]))
  density: alt(n)*(v[1|1] - v[1|-1] + 1/(v[0|2] - v) - 1/(v - v[0|-2]))
constraints:
  S(g) - S^-1(g)
multiplier lam:
  v[1|0] + 1/(v[0|1] - v[0|-1])
)";

const std::string kPartitioned = R"(# u' = u_2/u: decouples over the even and odd sublattices (period 2).
vars:
  continuous: x
  discrete: n
  dependent: u
ranking: deriv-major
period: 2
system:
  u[1|0] - u[0|2]/u
generator v1:
  xi: 1
  phi: 0
generator v2:
  xi: x
  phi: u
generator v3:
  xi: 0
  phi: pow(2, floor(n/2))*u
generator v4:
  xi: alt(n)
  phi: 0
generator v5:
  xi: alt(n)*x
  phi: alt(n)*u
generator v6:
  xi: 0
  phi: alt(n)*pow(2, floor(n/2))*u
generator doctored:
  xi: alt(n)*x
  phi: 0
)";

const std::string kNls = R"(# Spatial semi-discretization of the nonlinear Schrodinger equation,
# u = Re(psi), v = Im(psi), step size h.
vars:
  continuous: t
  discrete: n
  dependent: u, v
  parameters: h, gamma
ranking: deriv-major
system:
  u[1|0] + (v[0|1] - 2*v + v[0|-1])/h^2 + (u^2 + v^2)*v
  v[1|0] - (u[0|1] - 2*u + u[0|-1])/h^2 - (u^2 + v^2)*u
generator time:
  xi: 1
  phi: 0, 0
generator rotation:
  xi: 0
  phi: v, -u
generator combo:
  xi: 1
  phi: -gamma*v, gamma*u
)";

const std::string kLinsys = R"(# Linear three-field system with a gauge symmetry and one generating syzygy.
vars:
  continuous: x
  discrete: n
  dependent: u, v, w
  arbitrary: g1(x,n), g2(x,n), g3(x,n), f(x,n)
ranking: default
lagrangian: (u[0|1] - v - w[1|0]/2)*w[1|0] + v*(u[0|1] - u)
characteristic Qgauge:
  f[1|0], f[1|0], f[0|1] - f
characteristic Qconstrained:
  g1, g2, g3
constraints:
  Dx(g3) - Dn(g1)
  Dx(g2) - Dx(g1)
  Dn(g2) - Dn(g1)
multiplier lam:
  -u[0|1] + v + w[1|0], -w, u[0|1]
certificate syzygy:
  Dx(EL[u]) + Dx(EL[v]) + S^-1*Dn(EL[w])
)";

const std::map<std::string, const std::string*>& fixture_map() {
  static const std::map<std::string, const std::string*> m = {
      {"volterra", &kVolterra},
      {"partitioned", &kPartitioned},
      {"nls", &kNls},
      {"linsys3", &kLinsys},
  };
  return m;
}

CheckResult check(const std::string& name, bool pass, std::string detail = "") {
  return {name, pass, std::move(detail)};
}

FixtureResult run_volterra(const SampleConfig& cfg) {
  FixtureResult out{"volterra", {}};
  Problem p = corpus_problem("volterra");
  const Signature& sig = p.sig;
  Lagrangian L = p.lagrangian_or_fail();
  Expr el = euler_lagrange(L.density, 0, sig);
  SolvedSystem solved = p.solve();

  out.checks.push_back(check("el-matches-known-form",
                             is_zero(el - p.find_claw("basic")->density, sig, cfg).verdict ==
                                 ZeroVerdict::Yes));

  for (const char* name : {"basic", "alternating"}) {
    auto rep = verify_claw(*p.find_claw(name), solved, sig, cfg);
    out.checks.push_back(check(std::string("claw-") + name + "-verifies", rep.pass()));
  }
  out.checks.push_back(check(
      "claw-basic-not-shown-trivial",
      triviality_check(*p.find_claw("basic"), solved, sig, cfg) == Triviality::NotShownTrivial));

  out.checks.push_back(
      check("varsym-gauge-passes",
            varsym_check(L, *p.find_characteristic("Qgauge"), sig, cfg).pass()));
  out.checks.push_back(check(
      "varsym-rejects-v", !varsym_check(L, *p.find_characteristic("Qbad"), sig, cfg).pass()));

  // Noether's Theorem with the surplus decompositions P: each claw matches
  // the published components exactly.
  {
    DivComponents P = DivComponents::zeros(sig);
    P.F[0] = parse_expr("v[0|1]", sig);
    P.G[0] = parse_expr("-v[1|0]", sig);
    NoetherClaw nc = noether_claw(L, *p.find_characteristic("Qone"), sig, cfg, P);
    const ConservationLaw* known = p.find_claw("basic");
    bool same = structurally_equal(nc.claw.components.F[0], known->components.F[0]) &&
                structurally_equal(nc.claw.components.G[0], known->components.G[0]);
    out.checks.push_back(check("noether1-q1-matches-basic", same));
  }
  {
    DivComponents P = DivComponents::zeros(sig);
    P.F[0] = parse_expr("alt(n)*v[0|1]", sig);
    P.G[0] = parse_expr("alt(n)*v[1|0]", sig);
    NoetherClaw nc = noether_claw(L, *p.find_characteristic("Qalt"), sig, cfg, P);
    const ConservationLaw* known = p.find_claw("alternating");
    bool same = structurally_equal(nc.claw.components.F[0], known->components.F[0]) &&
                structurally_equal(nc.claw.components.G[0], known->components.G[0]);
    out.checks.push_back(check("noether1-qalt-matches-alternating", same));
  }

  // Ansatz over {1, alt(n), x, x alt(n), v}: the variational span excludes v.
  {
    std::vector<Characteristic> basis;
    for (const char* t : {"1", "alt(n)", "x", "x*alt(n)", "v"})
      basis.push_back(Characteristic{{parse_expr(t, sig)}});
    auto found = ansatz_solve(AnsatzProblem::variational(L), basis, sig, cfg);
    out.checks.push_back(check("ansatz-span-dimension-4", found.size() == 4,
                               "found " + std::to_string(found.size())));
  }

  // Intermediate theorem: the constraint g_1 - g_{-1} = 0 with the known
  // multiplier, and the resulting conservation-law family.
  {
    const Characteristic& q = *p.find_characteristic("Qg");
    const ExprList& lam = *p.find_multiplier("lam");
    auto rep = intermediate_determining(L, q, *p.constraints, lam, sig, cfg);
    out.checks.push_back(check("intermediate-multiplier-passes", rep.pass()));

    ConservationLaw claw = constrained_claw(*p.constraints, lam, std::nullopt, sig);
    Expr g = parse_expr("g", sig);
    Expr expectG =
        normalize(g * shift(lam[0], {-1}, sig) + shift(g, {-1}, sig) * lam[0], sig);
    bool same = claw.components.F[0].is_zero_number() &&
                structurally_equal(claw.components.G[0], expectG) &&
                normalize(divergence_of(claw, sig) - claw.density, sig).is_zero_number();
    out.checks.push_back(check("constrained-claw-matches-known-family", same));
  }
  return out;
}

FixtureResult run_partitioned(const SampleConfig& cfg) {
  FixtureResult out{"partitioned", {}};
  Problem p = corpus_problem("partitioned");
  const Signature& sig = p.sig;
  SolvedSystem solved = p.solve();

  for (const char* name : {"v1", "v2", "v3", "v4", "v5", "v6"}) {
    auto rep = lsc_check(p.system, solved, *p.find_generator(name), sig, cfg);
    out.checks.push_back(check(std::string("lsc-") + name + "-passes", rep.pass()));
  }
  auto kind_of = [&](const char* name) {
    return structure_check(*p.find_generator(name), sig, cfg).kind;
  };
  out.checks.push_back(check("structure-full-for-n-free-xi",
                             kind_of("v1") == StructureResult::Kind::PreservesFull &&
                                 kind_of("v2") == StructureResult::Kind::PreservesFull &&
                                 kind_of("v3") == StructureResult::Kind::PreservesFull &&
                                 kind_of("v6") == StructureResult::Kind::PreservesFull));
  out.checks.push_back(check("structure-reduced-for-alternating-xi",
                             kind_of("v4") == StructureResult::Kind::PreservesReduced &&
                                 kind_of("v5") == StructureResult::Kind::PreservesReduced));
  out.checks.push_back(check(
      "doctored-generator-fails-lsc",
      !lsc_check(p.system, solved, *p.find_generator("doctored"), sig, cfg).pass()));

  Expr restricted = restrict_to_solutions(parse_expr("u[1|1]", sig), solved, sig);
  out.checks.push_back(check(
      "restrict-first-prolongation",
      structurally_equal(restricted, parse_expr("u[0|3]/u[0|1]", sig))));
  return out;
}

FixtureResult run_nls(const SampleConfig& cfg) {
  FixtureResult out{"nls", {}};
  Problem p = corpus_problem("nls");
  const Signature& sig = p.sig;
  SolvedSystem solved = p.solve();

  for (const char* name : {"time", "rotation", "combo"}) {
    auto rep = lsc_check(p.system, solved, *p.find_generator(name), sig, cfg);
    out.checks.push_back(check(std::string("lsc-") + name + "-passes", rep.pass()));
  }

  Characteristic q = characteristic_of(*p.find_generator("combo"), sig);
  bool match = structurally_equal(q.Q[0], parse_expr("-gamma*v - u[1|0]", sig)) &&
               structurally_equal(q.Q[1], parse_expr("gamma*u - v[1|0]", sig));
  out.checks.push_back(check("combo-characteristic-matches", match));

  std::vector<Characteristic> basis{characteristic_of(*p.find_generator("time"), sig),
                                    characteristic_of(*p.find_generator("rotation"), sig)};
  auto found = ansatz_solve(AnsatzProblem::for_system(p.system, solved), basis, sig, cfg);
  out.checks.push_back(check("ansatz-point-symmetries-dimension-2", found.size() == 2,
                             "found " + std::to_string(found.size())));
  return out;
}

FixtureResult run_linsys(const SampleConfig& cfg) {
  FixtureResult out{"linsys3", {}};
  Problem p = corpus_problem("linsys3");
  const Signature& sig = p.sig;
  Lagrangian L = p.lagrangian_or_fail();

  Expr Eu = euler_lagrange(L.density, 0, sig);
  Expr Ev = euler_lagrange(L.density, 1, sig);
  Expr Ew = euler_lagrange(L.density, 2, sig);
  bool el_ok =
      normalize(Eu - parse_expr("w[1|-1] + v[0|-1] - v", sig), sig).is_zero_number() &&
      normalize(Ev - parse_expr("-w[1|0] + u[0|1] - u", sig), sig).is_zero_number() &&
      normalize(Ew - parse_expr("-u[1|1] + v[1|0] + w[2|0]", sig), sig).is_zero_number();
  out.checks.push_back(check("el-matches-known-forms", el_ok));

  const Characteristic& q = *p.find_characteristic("Qgauge");
  out.checks.push_back(check("varsym-gauge-passes", varsym_check(L, q, sig, cfg).pass()));

  auto n2 = noether2_relations(L, q, sig, cfg);
  bool cert_matches = false;
  if (n2.certificates.size() == 1 && n2.certificates[0].ops.size() == 3) {
    auto dx = LinearDDOperator::d_x(0, sig);
    auto sdn = op_compose(LinearDDOperator::shift_by({-1}, sig),
                          LinearDDOperator::d_n(0, sig), sig);
    auto neg = [&](const LinearDDOperator& o) { return o.scaled(Expr::integer(-1), sig); };
    const auto& ops = n2.certificates[0].ops;
    bool plus = op_equal(ops[0], dx, sig) && op_equal(ops[1], dx, sig) &&
                op_equal(ops[2], sdn, sig);
    bool minus = op_equal(ops[0], neg(dx), sig) && op_equal(ops[1], neg(dx), sig) &&
                 op_equal(ops[2], neg(sdn), sig);
    cert_matches = plus || minus;
  }
  out.checks.push_back(check("noether2-relation-exact",
                             n2.pass() && cert_matches &&
                                 n2.verified[0].verdict == ZeroVerdict::Yes));

  auto cert = relation_verify(*p.find_certificate("syzygy"), sig, cfg);
  out.checks.push_back(check("syzygy-certificate-exact", cert.verdict == ZeroVerdict::Yes));

  const ExprList& lam = *p.find_multiplier("lam");
  const Characteristic& qg = *p.find_characteristic("Qconstrained");
  auto rep = intermediate_determining(L, qg, *p.constraints, lam, sig, cfg);
  out.checks.push_back(check("intermediate-multiplier-passes", rep.pass()));

  ConservationLaw claw = constrained_claw(*p.constraints, lam, std::nullopt, sig);
  Expr expectF = parse_expr("(g1 - g2)*w + g3*(-u[0|1] + v + w[1|0])", sig);
  Expr expectG = parse_expr("-g1*(v[0|-1] + w[1|-1]) + g2*u", sig);
  bool same = structurally_equal(claw.components.F[0], normalize(expectF, sig)) &&
              structurally_equal(claw.components.G[0], normalize(expectG, sig)) &&
              normalize(divergence_of(claw, sig) - claw.density, sig).is_zero_number();
  out.checks.push_back(check("constrained-claw-matches-known-family", same));

  ConservationLaw gauge = gauge_trivial_claw(L, q, sig);
  out.checks.push_back(
      check("gauge-claw-divergence-exact",
            normalize(divergence_of(gauge, sig) - gauge.density, sig).is_zero_number()));
  return out;
}

}  // namespace

std::vector<std::string> corpus_fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : fixture_map()) out.push_back(name);
  return out;
}

const std::string& corpus_fixture_source(const std::string& name) {
  auto it = fixture_map().find(name);
  if (it == fixture_map().end())
    fail(ErrorKind::UndeclaredSymbol, "unknown corpus fixture '" + name + "'");
  return *it->second;
}

Problem corpus_problem(const std::string& name) {
  return parse_problem(corpus_fixture_source(name));
}

FixtureResult run_corpus_fixture(const std::string& name, const SampleConfig& cfg) {
  if (name == "volterra") return run_volterra(cfg);
  if (name == "partitioned") return run_partitioned(cfg);
  if (name == "nls") return run_nls(cfg);
  if (name == "linsys3") return run_linsys(cfg);
  fail(ErrorKind::UndeclaredSymbol, "unknown corpus fixture '" + name + "'");
}

std::vector<FixtureResult> run_corpus(const SampleConfig& cfg, bool parallel) {
  std::vector<std::string> names = corpus_fixture_names();
  std::vector<FixtureResult> out;
  if (parallel) {
    std::vector<std::future<FixtureResult>> futs;
    for (const auto& n : names)
      futs.push_back(std::async(std::launch::async,
                                [n, cfg]() { return run_corpus_fixture(n, cfg); }));
    for (auto& f : futs) out.push_back(f.get());
  } else {
    for (const auto& n : names) out.push_back(run_corpus_fixture(n, cfg));
  }
  return out;
}

}  // namespace ddn
