#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddn/evaluate.hpp"
#include "ddn/expr.hpp"
#include "ddn/jet_ops.hpp"
#include "ddn/variational.hpp"

namespace ddn {

// Evolutionary representation of a symmetry: one component per dependent
// variable, each a function of (x, n, [u; g]).
struct Characteristic {
  ExprList Q;

  static Characteristic zero(const Signature& sig);
};

// Infinitesimal generator.  Point mode carries xi/phi with phi restricted to
// unshifted, underived u; evolutionary mode is a bare characteristic.
// n-dependent xi is only meaningful for partitioned problems and must come
// with the sublattice period.
struct Generator {
  enum class Mode { Point, Evolutionary };
  Mode mode = Mode::Evolutionary;
  ExprList xi;   // p entries (Point)
  ExprList phi;  // q entries (Point)
  Characteristic evo;
  std::optional<std::vector<int>> period;

  static Generator point(ExprList xi, ExprList phi, const Signature& sig,
                         std::optional<std::vector<int>> period = std::nullopt);
  static Generator evolutionary(Characteristic q, const Signature& sig);
};

// Q^a = phi^a - xi^i u^a_{1_i;0} (identity on evolutionary generators).
Characteristic characteristic_of(const Generator& v, const Signature& sig);

// pr v(e) = xi^i D_i e + (S_K D_J Q^a) de/du^a_{J;K} over the coordinates
// present in e.
Expr prolong_apply(const Generator& v, const Expr& e, const Signature& sig);
Expr prolong_apply(const Characteristic& q, const Expr& e, const Signature& sig);

struct StructureResult {
  enum class Kind { PreservesFull, PreservesReduced, Fails };
  Kind kind;
  std::vector<int> period;  // for PreservesReduced
  std::string reason;       // for Fails
};

// Checks that xi is admissible: u-free and n-free for the full prolongation
// structure, or u-free and r-periodic in n for a partitioned problem.
StructureResult structure_check(const Generator& v, const Signature& sig,
                                const SampleConfig& cfg = {});

struct LscReport {
  StructureResult structure;
  std::vector<ZeroResult> per_equation;
  bool pass() const {
    for (const auto& r : per_equation)
      if (!r.affirmative()) return false;
    return true;
  }
};

// Linearized symmetry condition: restrict(pr v(A_l)) == 0 for every
// equation.  Throws StructureViolation when xi fails structure_check.
LscReport lsc_check(const std::vector<Expr>& system, const SolvedSystem& solved,
                    const Generator& v, const Signature& sig, const SampleConfig& cfg = {});

struct VarsymReport {
  std::vector<ZeroResult> per_alpha;
  std::vector<std::pair<int, ZeroResult>> per_arbitrary;
  bool pass() const {
    for (const auto& r : per_alpha)
      if (!r.affirmative()) return false;
    for (const auto& [r, res] : per_arbitrary)
      if (!res.affirmative()) return false;
    return true;
  }
};

// Variational symmetry test: E_a(pr v_Q(L)) == 0 for every field variable,
// and E_g(pr v_Q(L)) == 0 for every fully-dependent arbitrary function
// occurring in Q.  (Arbitrary functions of fewer variables are the domain
// of the constrained Noether machinery and are not tested here.)
VarsymReport varsym_check(const Lagrangian& L, const Characteristic& Q, const Signature& sig,
                          const SampleConfig& cfg = {});

// Linear ansatz solver.  Searches span{basis} for characteristics passing
// the variational (Lagrangian given) or linearized (system given) symmetry
// condition: a linear system over the unknown rational coefficients is
// assembled by exact evaluation at sampled points, its nullspace is
// computed, and every candidate is re-verified symbolically.  Only verified
// characteristics are returned.
struct AnsatzProblem {
  std::optional<Lagrangian> lagrangian;
  std::vector<Expr> system;
  std::optional<SolvedSystem> solved;

  static AnsatzProblem variational(Lagrangian L);
  static AnsatzProblem for_system(std::vector<Expr> system, SolvedSystem solved);
};

std::vector<Characteristic> ansatz_solve(const AnsatzProblem& problem,
                                         const std::vector<Characteristic>& basis,
                                         const Signature& sig, const SampleConfig& cfg = {});

}  // namespace ddn
