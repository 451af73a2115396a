#pragma once

#include <vector>

#include "ddn/evaluate.hpp"
#include "ddn/expr.hpp"
#include "ddn/jet_ops.hpp"

namespace ddn {

// One term f(x, n, [u]) D_J S_K of a linear differential-difference
// operator, coefficient on the left.
struct OpTerm {
  Expr coeff;
  std::vector<int> derivs;  // J >= 0
  std::vector<int> shifts;  // K in Z^m
};

struct LinearDDOperator {
  std::vector<OpTerm> terms;

  static LinearDDOperator zero() { return {}; }
  static LinearDDOperator identity(const Signature& sig);
  static LinearDDOperator d_x(int direction, const Signature& sig);
  static LinearDDOperator shift_by(const std::vector<int>& K, const Signature& sig);
  // Forward difference S_i - id.
  static LinearDDOperator d_n(int direction, const Signature& sig);
  static LinearDDOperator multiply(Expr f, const Signature& sig);

  LinearDDOperator scaled(const Expr& c, const Signature& sig) const;
};

// Merges coincident (J, K) terms, drops zero coefficients, sorts.
LinearDDOperator op_normalize(const LinearDDOperator& op, const Signature& sig);

Expr op_apply(const LinearDDOperator& op, const Expr& e, const Signature& sig);

LinearDDOperator op_add(const LinearDDOperator& a, const LinearDDOperator& b,
                        const Signature& sig);

// Composition a after b, coefficients of b carried through a's derivatives
// and shifts by the Leibniz rule.
LinearDDOperator op_compose(const LinearDDOperator& a, const LinearDDOperator& b,
                            const Signature& sig);

// Formal adjoint: the unique operator with f op(g) - (op^t f) g a
// differential-difference divergence.  D^t = -D, S^t = S^{-1}.
LinearDDOperator op_adjoint(const LinearDDOperator& op, const Signature& sig);

// Exact equality of normalized operators (coefficient-wise canonical zero).
bool op_equal(const LinearDDOperator& a, const LinearDDOperator& b, const Signature& sig);

std::string to_string(const LinearDDOperator& op, const Signature& sig);

// Explicit components of the divergence f op(g) - (op^t f) g.
struct DivComponents {
  ExprList F;  // length p
  ExprList G;  // length m

  static DivComponents zeros(const Signature& sig);
};

DivComponents div_add(const DivComponents& a, const DivComponents& b, const Signature& sig);
DivComponents div_negate(const DivComponents& a, const Signature& sig);

// Telescoping construction, one operator letter at a time:
//   f D_i h      = D_i(f h)            + (-D_i f) h
//   f S_i h      = D_{n_i}((S^{-1}f)h) + (S^{-1}_i f) h
//   f S^{-1}_i h = D_{n_i}(-f S^{-1}h) + (S_i f) h
DivComponents adjoint_defect(const LinearDDOperator& op, const Expr& f, const Expr& g,
                             const Signature& sig);

// D_i F^i + D_{n^i} G^i.
Expr divergence_expr(const DivComponents& c, const Signature& sig);

}  // namespace ddn
