#pragma once

#include <functional>
#include <vector>

#include "ddn/expr.hpp"
#include "ddn/normal.hpp"

namespace ddn {

// Derivation engine: extends a rule on leaves (jet variables, independent
// variables, parameters) to the whole tree by linearity, the Leibniz rule
// and the chain rule.  Builds a raw tree; callers normalize.
//
// alt and floor are locally constant in any continuous argument, so their
// derivative is zero under every derivation used here.
using LeafRule = std::function<Expr(const Expr& leaf)>;
Expr derive_raw(const Expr& e, const LeafRule& rule);

// d/dx^i on the prolongation space: acts on explicit x^i and sends
// u^a_{J;K} to u^a_{J+1_i;K} (arbitrary functions too, honoring their
// dependence masks).
Expr total_derivative(const Expr& e, int direction, const Signature& sig);

// Structural partial derivative treating the jet coordinate as an
// independent symbol (chain rule through builtins included).
Expr partial_jet(const Expr& e, const JetVar& v, const Signature& sig);

// S_K: n^i -> n^i + K^i, jet shift indices translate by K.  x fixed.
Expr shift(const Expr& e, const std::vector<int>& K, const Signature& sig);
Expr shift1(const Expr& e, int direction, int amount, const Signature& sig);

// Forward difference S_i - id.
Expr forward_difference(const Expr& e, int direction, const Signature& sig);

// Applies D_J = prod D_i^{J_i}.
Expr apply_derivatives(const Expr& e, const std::vector<int>& J, const Signature& sig);

// Positive rankings on jet variables.  All presets satisfy the four ranking
// axioms; "total shift" means the signed sum of the shift multi-index (an
// absolute value would fail compatibility with forward shifts of
// negatively shifted variables).
struct Ranking {
  enum class Preset { TotalOrder, DerivMajor, ShiftMajor };
  Preset preset = Preset::TotalOrder;

  static Ranking total_order() { return {Preset::TotalOrder}; }
  static Ranking deriv_major() { return {Preset::DerivMajor}; }
  static Ranking shift_major() { return {Preset::ShiftMajor}; }

  int compare(const JetVar& a, const JetVar& b) const;
  bool less(const JetVar& a, const JetVar& b) const { return compare(a, b) < 0; }
  const char* name() const;
};

// One equation solved for its leading variable: leader = rhs, with every
// variable of rhs ranked strictly below the leader.
struct SolvedEquation {
  JetVar leader;
  Expr rhs;
};

struct SolvedSystem {
  std::vector<SolvedEquation> equations;
  Ranking ranking;

  bool empty() const { return equations.empty(); }
};

// Solves each equation (given as an expression equated to zero) for its
// highest-ranked field variable.  The supported class is "affine in the
// leader".  Throws NotSolvable / OverlappingLeaders.
SolvedSystem solve_for_leading(const std::vector<Expr>& system, const Ranking& ranking,
                               const Signature& sig);

// Substitutes every occurrence of a leader prolongation D_J S_K U_l by the
// matching prolongation of the solved right-hand side, highest-ranked
// occurrence first, until none remains.  Throws NonTerminating past the cap.
Expr restrict_to_solutions(const Expr& e, const SolvedSystem& sys, const Signature& sig,
                           long cap = 10000);

}  // namespace ddn
