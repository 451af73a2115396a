#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ddn/symmetry.hpp"
#include "test_support.hpp"

using namespace ddn;
using namespace ddntest;

namespace {

Expr nls_eq1(const Signature&) {
  auto u = [](int d, int s) { return Expr::field(0, {d}, {s}); };
  auto v = [](int d, int s) { return Expr::field(1, {d}, {s}); };
  Expr hm2 = Expr::pow_int(Expr::param(0), -2);
  Expr sq = u(0, 0) * u(0, 0) + v(0, 0) * v(0, 0);
  return u(1, 0) + hm2 * (v(0, 1) - C(2) * v(0, 0) + v(0, -1)) + sq * v(0, 0);
}

Expr nls_eq2(const Signature&) {
  auto u = [](int d, int s) { return Expr::field(0, {d}, {s}); };
  auto v = [](int d, int s) { return Expr::field(1, {d}, {s}); };
  Expr hm2 = Expr::pow_int(Expr::param(0), -2);
  Expr sq = u(0, 0) * u(0, 0) + v(0, 0) * v(0, 0);
  return v(1, 0) - hm2 * (u(0, 1) - C(2) * u(0, 0) + u(0, -1)) - sq * u(0, 0);
}

std::vector<Generator> partitioned_generators(const Signature& sig) {
  Expr u = Expr::field(0, {0}, {0});
  Expr zero = C(0);
  Expr c = pow2_floor_half_n();
  std::vector<int> r{2};
  std::vector<Generator> gens;
  gens.push_back(Generator::point({C(1)}, {zero}, sig, r));                    // d/dx
  gens.push_back(Generator::point({X()}, {u}, sig, r));                        // x d/dx + u d/du
  gens.push_back(Generator::point({zero}, {normalize(c * u, sig)}, sig, r));   // 2^[n/2] u d/du
  gens.push_back(Generator::point({alt_n()}, {zero}, sig, r));                 // (-1)^n d/dx
  gens.push_back(Generator::point({normalize(alt_n() * X(), sig)},
                                  {normalize(alt_n() * u, sig)}, sig, r));     // (-1)^n (x d/dx + u d/du)
  gens.push_back(Generator::point({zero}, {normalize(alt_n() * c * u, sig)}, sig, r));
  return gens;
}

}  // namespace

TEST_CASE("characteristic of a point generator") {
  Signature sig = nls_signature();
  Expr gamma = Expr::param(1);
  // v1 - gamma v2 : xi = 1, phi = (-gamma v, gamma u)
  Expr u = Expr::field(0, {0}, {0});
  Expr v = Expr::field(1, {0}, {0});
  Generator g = Generator::point({C(1)}, {normalize(-(gamma * v), sig), normalize(gamma * u, sig)}, sig);
  Characteristic q = characteristic_of(g, sig);
  Expr q1_expect = normalize(-(gamma * v) - Expr::field(0, {1}, {0}), sig);
  Expr q2_expect = normalize(gamma * u - Expr::field(1, {1}, {0}), sig);
  CHECK(structurally_equal(q.Q[0], q1_expect));
  CHECK(structurally_equal(q.Q[1], q2_expect));

  // Evolutionary generators return their own characteristic.
  Characteristic rot{{v, normalize(-u, sig)}};
  Generator ev = Generator::evolutionary(rot, sig);
  CHECK(structurally_equal(characteristic_of(ev, sig).Q[0], v));
}

TEST_CASE("evolutionary prolongation") {
  Signature sig = scalar_signature();
  Expr u = Expr::field(0, {0}, {0});
  Characteristic q{{normalize(-Expr::field(0, {1}, {0}), sig)}};
  // pr v_Q(u) = Q
  CHECK(structurally_equal(prolong_apply(q, u, sig), q.Q[0]));
  // pr v_Q of an expression free of u (and x) is zero
  CHECK(prolong_apply(q, normalize(N() + C(3), sig), sig).is_zero_number());

  // Commutes with D_x and shifts (evolutionary mode).
  ExprGen gen(13, sig);
  SampleConfig cfg;
  for (int i = 0; i < 15; ++i) {
    Expr e = gen.gen_rational(3);
    Expr a = prolong_apply(q, total_derivative(e, 0, sig), sig);
    Expr b = total_derivative(prolong_apply(q, e, sig), 0, sig);
    CHECK(is_zero(a - b, sig, cfg).affirmative());
    Expr c = prolong_apply(q, shift(e, {1}, sig), sig);
    Expr d = shift(prolong_apply(q, e, sig), {1}, sig);
    CHECK(is_zero(c - d, sig, cfg).affirmative());
  }
}

TEST_CASE("prolongation of the rotation maps NLS equation 1 to equation 2") {
  Signature sig = nls_signature();
  Expr u = Expr::field(0, {0}, {0});
  Expr v = Expr::field(1, {0}, {0});
  Characteristic rot{{v, normalize(-u, sig)}};
  Expr pr = prolong_apply(rot, nls_eq1(sig), sig);
  CHECK(normalize(pr - nls_eq2(sig), sig).is_zero_number());
}

TEST_CASE("structure_check classifies xi") {
  Signature sig = scalar_signature();
  SampleConfig cfg;
  Expr zero = C(0);
  Expr u = Expr::field(0, {0}, {0});

  auto full = structure_check(Generator::point({X()}, {zero}, sig), sig, cfg);
  CHECK(full.kind == StructureResult::Kind::PreservesFull);

  auto fails_u = structure_check(Generator::point({u}, {zero}, sig), sig, cfg);
  CHECK(fails_u.kind == StructureResult::Kind::Fails);

  auto no_period = structure_check(Generator::point({normalize(alt_n() * X(), sig)}, {zero}, sig),
                                   sig, cfg);
  CHECK(no_period.kind == StructureResult::Kind::Fails);

  auto reduced = structure_check(
      Generator::point({normalize(alt_n() * X(), sig)}, {zero}, sig, std::vector<int>{2}), sig,
      cfg);
  CHECK(reduced.kind == StructureResult::Kind::PreservesReduced);
  CHECK(reduced.period == std::vector<int>{2});

  // Period 3 does not make alt periodic.
  auto wrong_period = structure_check(
      Generator::point({normalize(alt_n() * X(), sig)}, {zero}, sig, std::vector<int>{3}), sig,
      cfg);
  CHECK(wrong_period.kind == StructureResult::Kind::Fails);
}

TEST_CASE("LSC for the partitioned equation and its six generators") {
  Signature sig = scalar_signature();
  SampleConfig cfg;
  Expr A = partitioned_equation();
  auto solved = solve_for_leading({A}, Ranking::deriv_major(), sig);
  auto gens = partitioned_generators(sig);
  REQUIRE(gens.size() == 6);
  for (size_t i = 0; i < gens.size(); ++i) {
    CAPTURE(i);
    auto rep = lsc_check({A}, solved, gens[i], sig, cfg);
    CHECK(rep.pass());
  }

  // Structure classification: n-free xi (or zero) preserves the full space;
  // the alternating xi of generators 4 and 5 only preserves the r=2 reduced
  // space.
  CHECK(structure_check(gens[0], sig, cfg).kind == StructureResult::Kind::PreservesFull);
  CHECK(structure_check(gens[1], sig, cfg).kind == StructureResult::Kind::PreservesFull);
  CHECK(structure_check(gens[2], sig, cfg).kind == StructureResult::Kind::PreservesFull);
  CHECK(structure_check(gens[3], sig, cfg).kind == StructureResult::Kind::PreservesReduced);
  CHECK(structure_check(gens[4], sig, cfg).kind == StructureResult::Kind::PreservesReduced);
  CHECK(structure_check(gens[5], sig, cfg).kind == StructureResult::Kind::PreservesFull);

  // Doctored generator: the xi part of generator 5 without its phi fails.
  Generator doctored = Generator::point({normalize(alt_n() * X(), sig)}, {C(0)}, sig,
                                        std::vector<int>{2});
  auto rep = lsc_check({A}, solved, doctored, sig, cfg);
  CHECK(!rep.pass());
}

TEST_CASE("LSC for the NLS system") {
  Signature sig = nls_signature();
  SampleConfig cfg;
  Expr u = Expr::field(0, {0}, {0});
  Expr v = Expr::field(1, {0}, {0});
  std::vector<Expr> system{nls_eq1(sig), nls_eq2(sig)};
  auto solved = solve_for_leading(system, Ranking::deriv_major(), sig);

  Generator v1 = Generator::point({C(1)}, {C(0), C(0)}, sig);
  CHECK(lsc_check(system, solved, v1, sig, cfg).pass());

  Generator v2 = Generator::point({C(0)}, {v, normalize(-u, sig)}, sig);
  CHECK(lsc_check(system, solved, v2, sig, cfg).pass());

  Expr gamma = Expr::param(1);
  Generator combo = Generator::point(
      {C(1)}, {normalize(-(gamma * v), sig), normalize(gamma * u, sig)}, sig);
  CHECK(lsc_check(system, solved, combo, sig, cfg).pass());

  // A non-symmetry fails.
  Generator bad = Generator::point({C(0)}, {u, C(0)}, sig);
  CHECK(!lsc_check(system, solved, bad, sig, cfg).pass());
}

TEST_CASE("variational symmetry check for the Volterra Lagrangian") {
  Signature sig = volterra_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(volterra_lagrangian(), sig);

  // Q = g1(x) + (-1)^n g2(x)
  Expr g1 = Expr::arbitrary(0, {0}, {0});
  Expr g2 = Expr::arbitrary(1, {0}, {0});
  Characteristic q{{normalize(g1 + alt_n() * g2, sig)}};
  CHECK(varsym_check(L, q, sig, cfg).pass());

  // Q = v is not variational.
  Characteristic qv{{V(0, 0)}};
  CHECK(!varsym_check(L, qv, sig, cfg).pass());

  // Q = 0 trivially passes.
  CHECK(varsym_check(L, Characteristic::zero(sig), sig, cfg).pass());
}

TEST_CASE("ansatz_solve recovers the Volterra variational span") {
  Signature sig = volterra_signature();
  SampleConfig cfg;
  Lagrangian L = Lagrangian::make(volterra_lagrangian(), sig);
  std::vector<Characteristic> basis;
  for (Expr e : {C(1), alt_n(), X(), normalize(X() * alt_n(), sig), V(0, 0)})
    basis.push_back(Characteristic{{e}});

  auto found = ansatz_solve(AnsatzProblem::variational(L), basis, sig, cfg);
  CHECK(found.size() == 4);
  for (const auto& q : found) CHECK(varsym_check(L, q, sig, cfg).pass());

  // Empty basis: empty result.
  CHECK(ansatz_solve(AnsatzProblem::variational(L), {}, sig, cfg).empty());
}

TEST_CASE("ansatz_solve in system mode spans the NLS point symmetries") {
  Signature sig = nls_signature();
  SampleConfig cfg;
  Expr u = Expr::field(0, {0}, {0});
  Expr v = Expr::field(1, {0}, {0});
  std::vector<Expr> system{nls_eq1(sig), nls_eq2(sig)};
  auto solved = solve_for_leading(system, Ranking::deriv_major(), sig);

  Generator v1 = Generator::point({C(1)}, {C(0), C(0)}, sig);
  Generator v2 = Generator::point({C(0)}, {v, normalize(-u, sig)}, sig);
  std::vector<Characteristic> basis{characteristic_of(v1, sig), characteristic_of(v2, sig)};
  auto found = ansatz_solve(AnsatzProblem::for_system(system, solved), basis, sig, cfg);
  CHECK(found.size() == 2);
}
