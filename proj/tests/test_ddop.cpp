#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ddn/ddop.hpp"
#include "test_support.hpp"

using namespace ddn;
using namespace ddntest;

namespace {

LinearDDOperator random_operator(ExprGen& gen, const Signature& sig, int max_terms = 2) {
  LinearDDOperator op;
  int n = 1 + static_cast<int>(gen.raw() % max_terms);
  for (int i = 0; i < n; ++i) {
    OpTerm t;
    t.coeff = gen.gen_rational(2);
    t.derivs.assign(sig.p(), 0);
    t.shifts.assign(sig.m(), 0);
    t.derivs[gen.raw() % sig.p()] = static_cast<int>(gen.raw() % 3);
    t.shifts[gen.raw() % sig.m()] = static_cast<int>(gen.raw() % 5) - 2;
    op.terms.push_back(std::move(t));
  }
  return op_normalize(op, sig);
}

}  // namespace

TEST_CASE("apply basics") {
  Signature sig = scalar_signature();
  // D_x x^2 = 2x
  auto dx = LinearDDOperator::d_x(0, sig);
  CHECK(structurally_equal(op_apply(dx, Expr::pow_int(X(), 2), sig), normalize(C(2) * X(), sig)));

  // S^{-1} D_n w = w - w_{-1}
  auto op = op_compose(LinearDDOperator::shift_by({-1}, sig), LinearDDOperator::d_n(0, sig), sig);
  Expr w = Expr::field(0, {0}, {0});
  Expr expect = normalize(w - Expr::field(0, {0}, {-1}), sig);
  CHECK(structurally_equal(op_apply(op, w, sig), expect));

  // identity
  ExprGen gen(3, sig, true);
  for (int i = 0; i < 10; ++i) {
    Expr e = normalize(gen.gen(3), sig);
    CHECK(structurally_equal(op_apply(LinearDDOperator::identity(sig), e, sig), e));
  }
}

TEST_CASE("compose obeys the Leibniz rule") {
  Signature sig = scalar_signature();
  Expr u = Expr::field(0, {0}, {0});
  // D_x (f id) = f D_x + (D_x f) id with f = u^2
  Expr f = Expr::pow_int(u, 2);
  auto lhs = op_compose(LinearDDOperator::d_x(0, sig), LinearDDOperator::multiply(f, sig), sig);
  LinearDDOperator rhs;
  rhs.terms.push_back(OpTerm{f, {1}, {0}});
  rhs.terms.push_back(OpTerm{normalize(C(2) * u * Expr::field(0, {1}, {0}), sig), {0}, {0}});
  CHECK(op_equal(lhs, rhs, sig));

  // S compose S^{-1} = id
  auto s = LinearDDOperator::shift_by({1}, sig);
  auto sinv = LinearDDOperator::shift_by({-1}, sig);
  CHECK(op_equal(op_compose(s, sinv, sig), LinearDDOperator::identity(sig), sig));
}

TEST_CASE("compose agrees with double application") {
  Signature sig = scalar_signature();
  ExprGen gen(17, sig);
  SampleConfig cfg;
  for (int i = 0; i < 15; ++i) {
    auto a = random_operator(gen, sig);
    auto b = random_operator(gen, sig);
    Expr e = gen.gen_rational(2);
    Expr lhs = op_apply(op_compose(a, b, sig), e, sig);
    Expr rhs = op_apply(a, op_apply(b, e, sig), sig);
    CHECK(is_zero(lhs - rhs, sig, cfg).affirmative());
  }
}

TEST_CASE("adjoints of the building blocks") {
  Signature sig = scalar_signature();
  auto dx = LinearDDOperator::d_x(0, sig);
  CHECK(op_equal(op_adjoint(dx, sig), dx.scaled(C(-1), sig), sig));

  // Dn^t = -S^{-1} Dn
  auto dn = LinearDDOperator::d_n(0, sig);
  auto expect = op_compose(LinearDDOperator::shift_by({-1}, sig), dn, sig).scaled(C(-1), sig);
  CHECK(op_equal(op_adjoint(dn, sig), expect, sig));

  // S_K^t = S_{-K}, D_J^t = (-1)^|J| D_J
  ExprGen gen(29, sig);
  for (int i = 0; i < 20; ++i) {
    int k = static_cast<int>(gen.raw() % 7) - 3;
    auto s = LinearDDOperator::shift_by({k}, sig);
    CHECK(op_equal(op_adjoint(s, sig), LinearDDOperator::shift_by({-k}, sig), sig));
    int j = static_cast<int>(gen.raw() % 4);
    LinearDDOperator dj{{OpTerm{C(1), {j}, {0}}}};
    CHECK(op_equal(op_adjoint(dj, sig), dj.scaled(C(j % 2 == 0 ? 1 : -1), sig), sig));
  }
}

TEST_CASE("adjoint is an involution and antihomomorphism") {
  Signature sig = scalar_signature();
  ExprGen gen(41, sig);
  for (int i = 0; i < 20; ++i) {
    auto a = random_operator(gen, sig);
    auto b = random_operator(gen, sig);
    CHECK(op_equal(op_adjoint(op_adjoint(a, sig), sig), a, sig));
    auto lhs = op_adjoint(op_compose(a, b, sig), sig);
    auto rhs = op_compose(op_adjoint(b, sig), op_adjoint(a, sig), sig);
    CHECK(op_equal(lhs, rhs, sig));
  }
}

TEST_CASE("adjoint_defect closes the divergence identity") {
  Signature sig = scalar_signature();
  Expr u = Expr::field(0, {0}, {0});
  Expr f = Expr::pow_int(u, 2) + X();
  Expr g = Expr::field(0, {0}, {1}) * u;

  // op = D_x: F = f g, G = 0
  auto dx = LinearDDOperator::d_x(0, sig);
  auto c1 = adjoint_defect(dx, f, g, sig);
  CHECK(structurally_equal(c1.F[0], normalize(f * g, sig)));
  CHECK(c1.G[0].is_zero_number());

  // op = S: F = 0, G = (S^{-1} f) g
  auto s = LinearDDOperator::shift_by({1}, sig);
  auto c2 = adjoint_defect(s, f, g, sig);
  CHECK(c2.F[0].is_zero_number());
  CHECK(structurally_equal(c2.G[0], normalize(shift(f, {-1}, sig) * g, sig)));

  // random operators: D_i F^i + Dn G^i == f op(g) - (op^t f) g exactly
  ExprGen gen(53, sig);
  for (int i = 0; i < 15; ++i) {
    auto op = random_operator(gen, sig);
    Expr ff = gen.gen_rational(2);
    Expr gg = gen.gen_rational(2);
    auto comp = adjoint_defect(op, ff, gg, sig);
    Expr lhs = divergence_expr(comp, sig);
    Expr rhs = normalize(ff * op_apply(op, gg, sig) -
                             op_apply(op_adjoint(op, sig), ff, sig) * gg,
                         sig);
    CHECK(normalize(lhs - rhs, sig).is_zero_number());
  }
}
