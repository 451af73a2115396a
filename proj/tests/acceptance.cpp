// Acceptance suite: one check per shipped criterion, each printed as a
// single pass/fail line.  Tolerances are the engine defaults (8 sample
// points, 128-bit working precision, 1e-25 relative tolerance).

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ddn/corpus.hpp"
#include "ddn/parser.hpp"
#include "test_support.hpp"

using namespace ddn;
using namespace ddntest;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<bool()>& body) {
  bool pass = false;
  std::string note;
  try {
    pass = body();
  } catch (const std::exception& e) {
    note = std::string(" (") + e.what() + ")";
  }
  std::printf("criterion %2d [%s] %s%s\n", number, pass ? "PASS" : "FAIL", title.c_str(),
              note.c_str());
  if (!pass) ++failures;
}

bool c1_euler_lagrange_reproduction(const SampleConfig& cfg) {
  Problem p = corpus_problem("volterra");
  Expr el = euler_lagrange(p.lagrangian_or_fail().density, 0, p.sig);
  Expr known = parse_expr(
      "v[1|1] - v[1|-1] + 1/(v[0|2] - v) - 1/(v - v[0|-2])", p.sig);
  return is_zero(el - known, p.sig, cfg).verdict == ZeroVerdict::Yes;
}

bool c2_divergence_kernel(const SampleConfig& cfg) {
  Signature sig = scalar_signature();
  ExprGen gen(2024, sig, true);
  for (int i = 0; i < 50; ++i) {
    ConservationLaw claw;
    claw.components = DivComponents::zeros(sig);
    claw.components.F[0] = gen.gen(2);
    claw.components.G[0] = gen.gen(2);
    claw.density = divergence_of(claw, sig);
    if (is_divergence(claw.density, sig, cfg).verdict == ZeroVerdict::No) return false;
  }
  return is_divergence(Expr::field(0, {0}, {0}), sig, cfg).verdict == ZeroVerdict::No;
}

bool c3_volterra_conservation_laws(const SampleConfig& cfg) {
  Problem p = corpus_problem("volterra");
  Lagrangian L = p.lagrangian_or_fail();
  SolvedSystem solved = p.solve();
  struct Case {
    const char* claw;
    const char* q;
  } cases[] = {{"basic", "Qone"}, {"alternating", "Qalt"}};
  for (const auto& c : cases) {
    const ConservationLaw* claw = p.find_claw(c.claw);
    const Characteristic* q = p.find_characteristic(c.q);
    if (!claw || !q) return false;
    Expr density = noether_density(L, *q, p.sig);
    if (!is_zero(claw->density - density, p.sig, cfg).affirmative()) return false;
    ClawReport rep = verify_claw(*claw, solved, p.sig, cfg);
    if (!rep.pass()) return false;
  }
  return true;
}

bool c4_variational_symmetry_and_ansatz(const SampleConfig& cfg) {
  Problem p = corpus_problem("volterra");
  Lagrangian L = p.lagrangian_or_fail();
  if (!varsym_check(L, *p.find_characteristic("Qgauge"), p.sig, cfg).pass()) return false;

  std::vector<Characteristic> basis;
  for (const char* t : {"1", "alt(n)", "x", "x*alt(n)", "v"})
    basis.push_back(Characteristic{{parse_expr(t, p.sig)}});
  auto found = ansatz_solve(AnsatzProblem::variational(L), basis, p.sig, cfg);
  if (found.size() != 4) return false;
  for (const auto& q : found)
    if (!varsym_check(L, q, p.sig, cfg).pass()) return false;
  // The excluded direction: v alone is not variational.
  return !varsym_check(L, basis[4], p.sig, cfg).pass();
}

bool c5_partitioned_equation(const SampleConfig& cfg) {
  Problem p = corpus_problem("partitioned");
  SolvedSystem solved = p.solve();
  for (const char* name : {"v1", "v2", "v3", "v4", "v5", "v6"})
    if (!lsc_check(p.system, solved, *p.find_generator(name), p.sig, cfg).pass()) return false;
  auto kind_of = [&](const char* name) {
    return structure_check(*p.find_generator(name), p.sig, cfg).kind;
  };
  for (const char* name : {"v1", "v2", "v3", "v6"})
    if (kind_of(name) != StructureResult::Kind::PreservesFull) return false;
  for (const char* name : {"v4", "v5"}) {
    StructureResult r = structure_check(*p.find_generator(name), p.sig, cfg);
    if (r.kind != StructureResult::Kind::PreservesReduced) return false;
    if (r.period != std::vector<int>{2}) return false;
  }
  return !lsc_check(p.system, solved, *p.find_generator("doctored"), p.sig, cfg).pass();
}

bool c6_nls_system(const SampleConfig& cfg) {
  Problem p = corpus_problem("nls");
  SolvedSystem solved = p.solve();
  for (const char* name : {"time", "rotation", "combo"})
    if (!lsc_check(p.system, solved, *p.find_generator(name), p.sig, cfg).pass()) return false;
  Characteristic q = characteristic_of(*p.find_generator("combo"), p.sig);
  return structurally_equal(q.Q[0], parse_expr("-gamma*v - u[1|0]", p.sig)) &&
         structurally_equal(q.Q[1], parse_expr("gamma*u - v[1|0]", p.sig));
}

bool c7_relation_certificate(const SampleConfig& cfg) {
  Problem p = corpus_problem("linsys3");
  ZeroResult r = relation_verify(*p.find_certificate("syzygy"), p.sig, cfg);
  return r.verdict == ZeroVerdict::Yes;  // exact rational identity, not sampled
}

bool c8_intermediate_theorem(const SampleConfig& cfg) {
  {
    Problem p = corpus_problem("volterra");
    Lagrangian L = p.lagrangian_or_fail();
    const ExprList& lam = *p.find_multiplier("lam");
    const Characteristic& q = *p.find_characteristic("Qg");
    if (!intermediate_determining(L, q, *p.constraints, lam, p.sig, cfg).pass()) return false;

    ConservationLaw claw = constrained_claw(*p.constraints, lam, std::nullopt, p.sig);
    Expr g = parse_expr("g", p.sig);
    ConservationLaw known;
    known.components = DivComponents::zeros(p.sig);
    known.components.G[0] = normalize(
        g * shift(lam[0], {-1}, p.sig) + shift(g, {-1}, p.sig) * lam[0], p.sig);
    known.density = divergence_of(known, p.sig);
    ConservationLaw diff;
    diff.components = div_add(claw.components, div_negate(known.components, p.sig), p.sig);
    diff.density = normalize(claw.density - known.density, p.sig);
    if (triviality_check(diff, p.solve(), p.sig, cfg) != Triviality::Trivial) return false;
  }
  {
    Problem p = corpus_problem("linsys3");
    Lagrangian L = p.lagrangian_or_fail();
    const ExprList& lam = *p.find_multiplier("lam");
    const Characteristic& q = *p.find_characteristic("Qconstrained");
    if (!intermediate_determining(L, q, *p.constraints, lam, p.sig, cfg).pass()) return false;

    ConservationLaw claw = constrained_claw(*p.constraints, lam, std::nullopt, p.sig);
    ConservationLaw known;
    known.components = DivComponents::zeros(p.sig);
    known.components.F[0] =
        parse_expr("(g1 - g2)*w + g3*(-u[0|1] + v + w[1|0])", p.sig);
    known.components.G[0] = parse_expr("-g1*(v[0|-1] + w[1|-1]) + g2*u", p.sig);
    known.density = divergence_of(known, p.sig);
    ConservationLaw diff;
    diff.components = div_add(claw.components, div_negate(known.components, p.sig), p.sig);
    diff.density = normalize(claw.density - known.density, p.sig);
    // The gauge system has no solved form (its leaders overlap); the
    // difference is component-wise zero, so triviality holds under the
    // identity restriction.
    if (triviality_check(diff, SolvedSystem{}, p.sig, cfg) != Triviality::Trivial) return false;
  }
  return true;
}

bool c9_adjoint_and_commutation(const SampleConfig& cfg) {
  (void)cfg;
  Signature sig = scalar_signature();
  ExprGen gen(555, sig);
  // Coefficient depth 1 keeps the worst-case polynomial degree small; the
  // identities under test are degree-independent.
  auto random_operator = [&](int max_terms) {
    LinearDDOperator op;
    int n = 1 + static_cast<int>(gen.raw() % max_terms);
    for (int i = 0; i < n; ++i) {
      OpTerm t;
      t.coeff = gen.gen_rational(1);
      t.derivs = {static_cast<int>(gen.raw() % 3)};
      t.shifts = {static_cast<int>(gen.raw() % 5) - 2};
      op.terms.push_back(std::move(t));
    }
    return op_normalize(op, sig);
  };
  for (int i = 0; i < 100; ++i) {
    LinearDDOperator a = random_operator(2);
    LinearDDOperator b = random_operator(2);
    if (!op_equal(op_adjoint(op_compose(a, b, sig), sig),
                  op_compose(op_adjoint(b, sig), op_adjoint(a, sig), sig), sig))
      return false;
    if (!op_equal(op_adjoint(op_adjoint(a, sig), sig), a, sig)) return false;
  }
  ExprGen gen2(556, sig, true);
  for (int i = 0; i < 100; ++i) {
    Expr e = gen2.gen(3);
    int k = static_cast<int>(gen2.raw() % 5) - 2;
    Expr lhs = total_derivative(shift(e, {k}, sig), 0, sig);
    Expr rhs = shift(total_derivative(e, 0, sig), {k}, sig);
    if (!normalize(lhs - rhs, sig).is_zero_number()) return false;
  }
  return true;
}

bool c10_noether_identity(const SampleConfig& cfg) {
  Signature sig = scalar_signature();
  ExprGen gen(777, sig);
  for (int i = 0; i < 20; ++i) {
    Lagrangian L = Lagrangian::make(gen.gen_rational(3), sig);
    Characteristic q{{gen.gen_rational(2)}};
    DivComponents ibp = noether_ibp_components(L, q, sig);
    Expr residual = prolong_apply(q, L.density, sig) - noether_density(L, q, sig) -
                    divergence_expr(ibp, sig);
    if (!is_zero(residual, sig, cfg).affirmative()) return false;
    // Rational inputs close exactly.
    if (!normalize(residual, sig).is_zero_number()) return false;
  }
  return true;
}

}  // namespace

int main() {
  SampleConfig cfg;  // defaults: 8 points, 128 bits, 1e-25 relative tolerance

  criterion(1, "Euler-Lagrange reproduction on the Volterra Lagrangian",
            [&] { return c1_euler_lagrange_reproduction(cfg); });
  criterion(2, "divergence kernel test on 50 random component lists",
            [&] { return c2_divergence_kernel(cfg); });
  criterion(3, "both Volterra conservation laws verify with Noether densities",
            [&] { return c3_volterra_conservation_laws(cfg); });
  criterion(4, "variational symmetry characteristic and ansatz span",
            [&] { return c4_variational_symmetry_and_ansatz(cfg); });
  criterion(5, "partitioned equation: six generators, structure classes, doctored failure",
            [&] { return c5_partitioned_equation(cfg); });
  criterion(6, "semi-discrete NLS: symmetries and rotation characteristic",
            [&] { return c6_nls_system(cfg); });
  criterion(7, "three-field syzygy certificate verifies exactly",
            [&] { return c7_relation_certificate(cfg); });
  criterion(8, "intermediate theorem multipliers and conservation-law families",
            [&] { return c8_intermediate_theorem(cfg); });
  criterion(9, "adjoint composition/involution and commutation property suites",
            [&] { return c9_adjoint_and_commutation(cfg); });
  criterion(10, "constructive Noether identity on 20 random pairs",
            [&] { return c10_noether_identity(cfg); });

  if (failures == 0) {
    std::printf("acceptance: all 10 criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failures);
  return 1;
}
