#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ddn/noether.hpp"
#include "test_support.hpp"

using namespace ddn;
using namespace ddntest;

namespace {

// Constraint g_1 - g_{-1} = 0 for the single full-dependence function g
// (index 2 of the Volterra signature used below).
Signature volterra_with_gauge() {
  Signature sig = volterra_signature();
  sig.arbitrary.push_back({"g", {true}, {true}});
  return sig;
}

ConstraintSet volterra_constraint(const Signature& sig) {
  ConstraintSet cs;
  LinearDDOperator op = op_add(LinearDDOperator::shift_by({1}, sig),
                               LinearDDOperator::shift_by({-1}, sig).scaled(C(-1), sig), sig);
  cs.ops = {{op}};
  cs.functions = {2};  // the full-dependence g, not the x-only g1/g2
  return cs;
}

}  // namespace

TEST_CASE("noether_density basics") {
  Signature sig = volterra_signature();
  Lagrangian L = Lagrangian::make(volterra_lagrangian(), sig);
  Expr el = euler_lagrange(L.density, 0, sig);

  Characteristic one{{C(1)}};
  CHECK(normalize(noether_density(L, one, sig) - el, sig).is_zero_number());

  CHECK(noether_density(L, Characteristic::zero(sig), sig).is_zero_number());

  Characteristic alt{{alt_n()}};
  CHECK(normalize(noether_density(L, alt, sig) - alt_n() * el, sig).is_zero_number());
}

TEST_CASE("the integration-by-parts identity is exact for random pairs") {
  Signature sig = scalar_signature();
  ExprGen gen(83, sig);
  for (int i = 0; i < 12; ++i) {
    Lagrangian L = Lagrangian::make(gen.gen_rational(3), sig);
    Characteristic q{{gen.gen_rational(2)}};
    DivComponents ibp = noether_ibp_components(L, q, sig);
    Expr residual = prolong_apply(q, L.density, sig) - noether_density(L, q, sig) -
                    divergence_expr(ibp, sig);
    CAPTURE(to_string(L.density, sig));
    CHECK(normalize(residual, sig).is_zero_number());
  }
}

TEST_CASE("noether_claw reproduces both Volterra conservation laws") {
  Signature sig = volterra_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(volterra_lagrangian(), sig);
  Expr el = euler_lagrange(L.density, 0, sig);
  auto solved = solve_for_leading({el}, Ranking::total_order(), sig);
  Expr uu = Expr::div(C(1), V(0, 1) - V(0, -1));

  // Q = 1 with P = (v1, -v'): claw components match the known form exactly.
  {
    Characteristic q{{C(1)}};
    DivComponents P = DivComponents::zeros(sig);
    P.F[0] = V(0, 1);
    P.G[0] = normalize(-V(1, 0), sig);
    NoetherClaw nc = noether_claw(L, q, sig, cfg, P);
    CHECK(normalize(nc.claw.density - el, sig).is_zero_number());
    Expr expectF = normalize(V(0, 1) - V(0, -1), sig);
    Expr expectG = normalize(uu + shift(uu, {-1}, sig), sig);
    CHECK(structurally_equal(nc.claw.components.F[0], expectF));
    CHECK(structurally_equal(nc.claw.components.G[0], expectG));
    CHECK(verify_claw(nc.claw, solved, sig, cfg).pass());
  }

  // Q = alt(n) with P = (alt v1, alt v').
  {
    Characteristic q{{alt_n()}};
    DivComponents P = DivComponents::zeros(sig);
    P.F[0] = normalize(alt_n() * V(0, 1), sig);
    P.G[0] = normalize(alt_n() * V(1, 0), sig);
    NoetherClaw nc = noether_claw(L, q, sig, cfg, P);
    Expr expectF = normalize(alt_n() * (V(0, 1) - V(0, -1)), sig);
    Expr expectG = normalize(-(alt_n() * (uu - shift(uu, {-1}, sig))), sig);
    CHECK(structurally_equal(nc.claw.components.F[0], expectF));
    CHECK(structurally_equal(nc.claw.components.G[0], expectG));
    CHECK(verify_claw(nc.claw, solved, sig, cfg).pass());
  }

  // Non-variational characteristic is rejected.
  Characteristic qv{{V(0, 0)}};
  CHECK_THROWS_AS(noether_claw(L, qv, sig, cfg), Error);

  // Missing decomposition is reported.
  Characteristic one{{C(1)}};
  CHECK_THROWS_AS(noether_claw(L, one, sig, cfg), Error);
}

TEST_CASE("second-theorem relations for the three-field linear system") {
  Signature sig = linsys_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), sig);

  // Constraints solved: g1 = f', g2 = f', g3 = Dn f  (c = 0).
  Expr fp = Expr::arbitrary(0, {1}, {0});
  Expr dnf = Expr::arbitrary(0, {0}, {1}) - Expr::arbitrary(0, {0}, {0});
  Characteristic q{{fp, fp, normalize(dnf, sig)}};

  CHECK(varsym_check(L, q, sig, cfg).pass());

  auto res = noether2_relations(L, q, sig, cfg);
  REQUIRE(res.relations.size() == 1);
  CHECK(res.pass());
  CHECK(res.verified[0].verdict == ZeroVerdict::Yes);

  // The relation certificate is (Dx, Dx, S^{-1}Dn) on (Eu, Ev, Ew), up to
  // an overall sign.
  REQUIRE(res.certificates.size() == 1);
  const auto& ops = res.certificates[0].ops;
  REQUIRE(ops.size() == 3);
  auto dx = LinearDDOperator::d_x(0, sig);
  auto sdn = op_compose(LinearDDOperator::shift_by({-1}, sig), LinearDDOperator::d_n(0, sig),
                        sig);
  auto neg = [&](const LinearDDOperator& o) { return o.scaled(C(-1), sig); };
  bool plus = op_equal(ops[0], dx, sig) && op_equal(ops[1], dx, sig) &&
              op_equal(ops[2], sdn, sig);
  bool minus = op_equal(ops[0], neg(dx), sig) && op_equal(ops[1], neg(dx), sig) &&
               op_equal(ops[2], neg(sdn), sig);
  CHECK((plus || minus));

  // Q independent of g is rejected.
  Characteristic qconst{{C(1), C(0), C(0)}};
  CHECK_THROWS_AS(noether2_relations(L, qconst, sig, cfg), Error);
}

TEST_CASE("relation certificate for the three-field system verifies exactly") {
  Signature sig = linsys_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), sig);
  RelationCertificate cert;
  cert.ops = {LinearDDOperator::d_x(0, sig), LinearDDOperator::d_x(0, sig),
              op_compose(LinearDDOperator::shift_by({-1}, sig), LinearDDOperator::d_n(0, sig),
                         sig)};
  cert.targets = {euler_lagrange(L.density, 0, sig), euler_lagrange(L.density, 1, sig),
                  euler_lagrange(L.density, 2, sig)};
  ZeroResult r = relation_verify(cert, sig, cfg);
  CHECK(r.verdict == ZeroVerdict::Yes);

  // One flipped sign breaks the identity.
  RelationCertificate bad = cert;
  bad.ops[1] = bad.ops[1].scaled(C(-1), sig);
  CHECK(relation_verify(bad, sig, cfg).verdict == ZeroVerdict::No);

  // Empty certificate passes vacuously.
  RelationCertificate empty;
  CHECK(relation_verify(empty, sig, cfg).verdict == ZeroVerdict::Yes);
}

TEST_CASE("intermediate theorem on the Volterra equation") {
  Signature sig = volterra_with_gauge();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(volterra_lagrangian(), sig);
  ConstraintSet cs = volterra_constraint(sig);

  // Q = g (the full-dependence arbitrary function, index 2).
  Characteristic q{{Expr::arbitrary(2, {0}, {0})}};
  ExprList lambda{normalize(V(1, 0) + Expr::div(C(1), V(0, 1) - V(0, -1)), sig)};
  auto rep = intermediate_determining(L, q, cs, lambda, sig, cfg);
  CHECK(rep.pass());

  // lambda = 0 fails.
  auto rep0 = intermediate_determining(L, q, cs, ExprList{C(0)}, sig, cfg);
  CHECK(!rep0.pass());

  // The constrained conservation law matches the known one exactly:
  //   Dn{ g lambda_{-1} + g_{-1} lambda }.
  ConservationLaw claw = constrained_claw(cs, lambda, std::nullopt, sig);
  Expr g = Expr::arbitrary(2, {0}, {0});
  Expr expectG = normalize(g * shift(lambda[0], {-1}, sig) + shift(g, {-1}, sig) * lambda[0], sig);
  CHECK(claw.components.F[0].is_zero_number());
  CHECK(structurally_equal(claw.components.G[0], expectG));
  // Divergence identity is exact.
  CHECK(normalize(divergence_of(claw, sig) - claw.density, sig).is_zero_number());

  // Multiplier search over a small basis recovers a verified solution.
  std::vector<ExprList> basis;
  basis.push_back({V(1, 0)});
  basis.push_back({Expr::div(C(1), V(0, 1) - V(0, -1))});
  basis.push_back({V(0, 0)});
  auto found = solve_multipliers(L, q, cs, basis, sig, cfg);
  REQUIRE(found.has_value());
  CHECK(intermediate_determining(L, q, cs, *found, sig, cfg).pass());
}

TEST_CASE("intermediate theorem on the three-field system") {
  Signature sig = linsys_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), sig);
  auto u = [](int d, int s) { return Expr::field(0, {d}, {s}); };
  auto v = [](int d, int s) { return Expr::field(1, {d}, {s}); };
  auto w = [](int d, int s) { return Expr::field(2, {d}, {s}); };

  // Constraints: Dx g3 - Dn g1 = 0; Dx(g2 - g1) = 0; Dn(g2 - g1) = 0.
  // Functions are ordered (g1, g2, g3); here all three are instances of the
  // single arbitrary symbol family: use a 3-function signature.
  Signature s3 = sig;
  s3.arbitrary = {{"g1", {true}, {true}}, {"g2", {true}, {true}}, {"g3", {true}, {true}}};
  auto dx = LinearDDOperator::d_x(0, s3);
  auto dn = LinearDDOperator::d_n(0, s3);
  auto zero = LinearDDOperator::zero();
  ConstraintSet cs;
  cs.ops = {{dn.scaled(C(-1), s3), zero, dx},
           {dx.scaled(C(-1), s3), dx, zero},
           {dn.scaled(C(-1), s3), dn, zero}};

  Characteristic q{{Expr::arbitrary(0, {0}, {0}), Expr::arbitrary(1, {0}, {0}),
                    Expr::arbitrary(2, {0}, {0})}};
  ExprList lambda{normalize(-u(0, 1) + v(0, 0) + w(1, 0), s3), normalize(-w(0, 0), s3),
                  u(0, 1)};
  auto rep = intermediate_determining(Lagrangian::make(linsys_lagrangian(), s3), q, cs, lambda,
                                      s3, cfg);
  CHECK(rep.pass());

  // Components match the stated family:
  //   F = (g1 - g2) w + g3 (-u1 + v + w'),  G = -g1 (v_{-1} + w'_{-1}) + g2 u.
  ConservationLaw claw = constrained_claw(cs, lambda, std::nullopt, s3);
  Expr g1 = Expr::arbitrary(0, {0}, {0});
  Expr g2 = Expr::arbitrary(1, {0}, {0});
  Expr g3 = Expr::arbitrary(2, {0}, {0});
  Expr expectF = normalize((g1 - g2) * w(0, 0) + g3 * (-u(0, 1) + v(0, 0) + w(1, 0)), s3);
  Expr expectG = normalize(-(g1 * (v(0, -1) + w(1, -1))) + g2 * u(0, 0), s3);
  CHECK(structurally_equal(claw.components.F[0], expectF));
  CHECK(structurally_equal(claw.components.G[0], expectG));
  CHECK(normalize(divergence_of(claw, s3) - claw.density, s3).is_zero_number());
}

TEST_CASE("adjoint characteristic round trip") {
  Signature sig = linsys_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), sig);

  // Relations (Dx, Dx, S^{-1}Dn) yield Q^a = (D^a)^t g.
  auto dx = LinearDDOperator::d_x(0, sig);
  auto sdn = op_compose(LinearDDOperator::shift_by({-1}, sig), LinearDDOperator::d_n(0, sig), sig);
  Expr g = Expr::arbitrary(0, {0}, {0});
  Characteristic q = adjoint_characteristic({{dx}, {dx}, {sdn}}, {g}, sig);

  // Q = (-g', -g', g - g1)
  CHECK(structurally_equal(q.Q[0], normalize(-Expr::arbitrary(0, {1}, {0}), sig)));
  CHECK(structurally_equal(q.Q[2],
                           normalize(g - Expr::arbitrary(0, {0}, {1}), sig)));

  // It is a gauge variational symmetry and reproduces the relation.
  CHECK(varsym_check(L, q, sig, cfg).pass());
  auto res = noether2_relations(L, q, sig, cfg);
  CHECK(res.pass());
}

TEST_CASE("gauge conservation laws are component-wise trivial") {
  Signature sig = linsys_signature();
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), sig);
  Expr fp = Expr::arbitrary(0, {1}, {0});
  Expr dnf = normalize(Expr::arbitrary(0, {0}, {1}) - Expr::arbitrary(0, {0}, {0}), sig);
  Characteristic q{{fp, fp, dnf}};

  ConservationLaw claw = gauge_trivial_claw(L, q, sig);
  // The divergence identity holds exactly.
  CHECK(normalize(divergence_of(claw, sig) - claw.density, sig).is_zero_number());

  // Every component vanishes when the Euler-Lagrange expressions (markers
  // here) are sent to zero: rebuild over a marker signature.
  Signature marked = sig;
  marked.dependent.push_back("eu");
  marked.dependent.push_back("ev");
  marked.dependent.push_back("ew");
  auto marker = [&](int i) { return Expr::field(3 + i, {0, }, {0}); };
  // Q over the marker signature (same g structure).
  Characteristic qm{{Expr::arbitrary(0, {1}, {0}), Expr::arbitrary(0, {1}, {0}),
                     normalize(Expr::arbitrary(0, {0}, {1}) - Expr::arbitrary(0, {0}, {0}),
                               marked),
                     C(0), C(0), C(0)}};
  ExprList markers{marker(0), marker(1), marker(2)};
  DivComponents comp = DivComponents::zeros(marked);
  for (int r = 0; r < marked.num_arbitrary(); ++r) {
    LinearDDOperator op = gauge_relation_operator(qm, markers, r, marked);
    if (op.terms.empty()) continue;
    Expr garg = Expr::arbitrary(r, {0}, {0});
    comp = div_add(comp, adjoint_defect(op, C(1), garg, marked), marked);
  }
  // Substitute every prolongation of the markers by zero.
  auto kill_markers = [&](Expr e) {
    for (const auto& jv : collect_jet_vars(e))
      if (jv.owner == JetVar::Owner::Field && jv.index >= 3)
        e = substitute_jet(e, jv, C(0));
    return normalize(e, marked);
  };
  for (const auto& f : comp.F) CHECK(kill_markers(f).is_zero_number());
  for (const auto& gcomp : comp.G) CHECK(kill_markers(gcomp).is_zero_number());
}

TEST_CASE("noether_claw with a strict symmetry needs no surplus decomposition") {
  Signature sig = scalar_signature();
  SampleConfig cfg;
  // L = (u1 - u)^2 is translation invariant: pr v_Q(L) = 0 for Q = 1.
  Expr u = Expr::field(0, {0}, {0});
  Expr u1 = Expr::field(0, {0}, {1});
  Lagrangian L = Lagrangian::make(Expr::pow_int(u1 - u, 2), sig);
  Characteristic q{{C(1)}};
  CHECK(prolong_apply(q, L.density, sig).is_zero_number());

  NoetherClaw nc = noether_claw(L, q, sig, cfg);
  CHECK(normalize(divergence_of(nc.claw, sig) - nc.claw.density, sig).is_zero_number());
  CHECK(normalize(nc.claw.density - euler_lagrange(L.density, 0, sig), sig).is_zero_number());
}

TEST_CASE("nonzero relations are reported as errors") {
  Signature sig = linsys_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), sig);
  // Q = (f, 0, 0) is linear homogeneous in f but not a gauge symmetry.
  Characteristic q{{Expr::arbitrary(0, {0}, {0}), C(0), C(0)}};
  CHECK_THROWS_AS(noether2_relations(L, q, sig, cfg), Error);
}

TEST_CASE("multiplier search on the three-field system") {
  Signature sig = linsys_signature();
  Signature s3 = sig;
  s3.arbitrary = {{"g1", {true}, {true}}, {"g2", {true}, {true}}, {"g3", {true}, {true}}};
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(linsys_lagrangian(), s3);
  auto u = [](int d, int s) { return Expr::field(0, {d}, {s}); };
  auto v = [](int d, int s) { return Expr::field(1, {d}, {s}); };
  auto w = [](int d, int s) { return Expr::field(2, {d}, {s}); };
  auto dx = LinearDDOperator::d_x(0, s3);
  auto dn = LinearDDOperator::d_n(0, s3);
  auto zero = LinearDDOperator::zero();
  ConstraintSet cs;
  cs.ops = {{dn.scaled(C(-1), s3), zero, dx},
            {dx.scaled(C(-1), s3), dx, zero},
            {dn.scaled(C(-1), s3), dn, zero}};
  Characteristic q{{Expr::arbitrary(0, {0}, {0}), Expr::arbitrary(1, {0}, {0}),
                    Expr::arbitrary(2, {0}, {0})}};
  // Candidate directions spanning the known solution plus noise.
  std::vector<ExprList> basis;
  basis.push_back({u(0, 1), C(0), C(0)});
  basis.push_back({v(0, 0), C(0), C(0)});
  basis.push_back({w(1, 0), C(0), C(0)});
  basis.push_back({C(0), w(0, 0), C(0)});
  basis.push_back({C(0), C(0), u(0, 1)});
  basis.push_back({C(0), u(0, 0), C(0)});
  auto found = solve_multipliers(L, q, cs, basis, s3, cfg);
  REQUIRE(found.has_value());
  CHECK(intermediate_determining(L, q, cs, *found, s3, cfg).pass());
}
