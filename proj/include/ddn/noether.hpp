#pragma once

#include <optional>
#include <vector>

#include "ddn/ddop.hpp"
#include "ddn/symmetry.hpp"
#include "ddn/variational.hpp"

namespace ddn {

// sum_a Q^a E_{u^a}(L): the conservation-law density Noether's Theorem
// attaches to a variational characteristic.
Expr noether_density(const Lagrangian& L, const Characteristic& Q, const Signature& sig);

// Constructive integration-by-parts form of the key identity: components
// with  D_i F^i + D_n G^i = pr v_Q(L) - Q^a E_{u^a}(L),  built term by term
// from (dL/du^a_{J;K}, D_J S_K, Q^a) triples.  Exact by construction.
DivComponents noether_ibp_components(const Lagrangian& L, const Characteristic& Q,
                                     const Signature& sig);

struct NoetherClaw {
  ConservationLaw claw;   // density = noether_density(L, Q)
  Expr surplus;           // pr v_Q(L), decomposed into the components when possible
};

// Assembles the conservation law for a variational Q.  When pr v_Q(L) is
// not syntactically zero a decomposition P with div(P) = pr v_Q(L) must be
// supplied; otherwise DecompositionIncomplete is thrown.  Throws
// NotVariational when varsym_check fails.
NoetherClaw noether_claw(const Lagrangian& L, const Characteristic& Q, const Signature& sig,
                         const SampleConfig& cfg = {},
                         const std::optional<DivComponents>& P = std::nullopt);

// Every monomial carries exactly one arbitrary-function coordinate, to the
// first power, with coefficients free of them.
bool is_linear_homogeneous_in_arbitrary(const Expr& e, const Signature& sig);

// A claimed syzygy sum_l D^l(target_l) == 0, verified as an identity in the
// free jet variables (no restriction to solutions).  target_labels carries
// the source spelling (EL[u], A[1]) for printing; it may be empty.
struct RelationCertificate {
  std::vector<LinearDDOperator> ops;
  ExprList targets;
  std::vector<std::string> target_labels;
};

struct Noether2Result {
  std::vector<int> function_indices;  // which g^r each relation belongs to
  // One certificate per relation: operators D^a_r with D^a_r E_{u^a}(L) == 0.
  std::vector<RelationCertificate> certificates;
  ExprList relations;                 // the assembled left-hand sides
  std::vector<ZeroResult> verified;   // identity check per relation
  bool pass() const {
    for (const auto& r : verified)
      if (!r.affirmative()) return false;
    return true;
  }
};

// Noether's Second Theorem: for Q linear homogeneous in arbitrary functions
// of all independent variables, extracts the differential-difference
// relations E_{g^r}(Q^a E_{u^a}(L)) between the Euler-Lagrange equations,
// both as operator certificates and as assembled expressions, and verifies
// each vanishes identically.
Noether2Result noether2_relations(const Lagrangian& L, const Characteristic& Q,
                                  const Signature& sig, const SampleConfig& cfg = {});

// Constraints D^i_r g^r = 0 with (x, n)-dependent coefficients;
// completeness is a user assertion, recorded as given.  `functions` maps the
// matrix columns to arbitrary-function indices of the signature (defaults
// to 0..R-1 when empty).
struct ConstraintSet {
  std::vector<std::vector<LinearDDOperator>> ops;  // [constraint i][function r]
  std::vector<int> functions;
  bool declared_complete = true;

  int num_constraints() const { return static_cast<int>(ops.size()); }
  int num_functions() const { return ops.empty() ? 0 : static_cast<int>(ops[0].size()); }
  int function_index(int r) const {
    return functions.empty() ? r : functions.at(r);
  }

  void validate(const Signature& sig) const;
};

struct IntermediateReport {
  std::vector<ZeroResult> per_function;  // determining equation residual per r
  bool pass() const {
    for (const auto& r : per_function)
      if (!r.affirmative()) return false;
    return true;
  }
};

// Determining equations of the intermediate Noether-type theorem:
//   E_{g^r}(Q^a E_{u^a}(L)) + (D^i_r)^t lambda_i = 0.
IntermediateReport intermediate_determining(const Lagrangian& L, const Characteristic& Q,
                                            const ConstraintSet& C, const ExprList& lambda,
                                            const Signature& sig, const SampleConfig& cfg = {});

// Family of conservation laws attached to a multiplier solution:
//   density  lambda_i D^i_r g^r - g^r (D^i_r)^t lambda_i,
// with components assembled telescopically so the divergence identity is
// exact.  g defaults to the symbolic arbitrary functions; pass expressions
// to instantiate.
ConservationLaw constrained_claw(const ConstraintSet& C, const ExprList& lambda,
                                 const std::optional<ExprList>& g_instances,
                                 const Signature& sig);

ZeroResult relation_verify(const RelationCertificate& cert, const Signature& sig,
                           const SampleConfig& cfg = {});

// Gauge characteristic from relation operators: Q^a = (D^a_r)^t g^r.
Characteristic adjoint_characteristic(const std::vector<std::vector<LinearDDOperator>>& ops,
                                      const ExprList& g, const Signature& sig);

// The operator sum_{J,K} A^{J;K} D_J S_K with A^{J;K} = dQ^a/dg^r_{J;K}
// targets[a]; with targets = E(L) its adjoint applied to 1 is the r-th
// second-theorem relation.
LinearDDOperator gauge_relation_operator(const Characteristic& Q, const ExprList& targets,
                                         int r, const Signature& sig);

// The component-wise trivial representative the second theorem attaches to
// a gauge symmetry: components of the divergence identity for
// (1, gauge_relation_operator, g^r).  Every component is a linear
// combination of prolongations of the Euler-Lagrange expressions.
ConservationLaw gauge_trivial_claw(const Lagrangian& L, const Characteristic& Q,
                                   const Signature& sig);

// Best-effort multiplier search over a user-supplied basis of candidate
// lambda vectors; returns the first verified affine solution.
std::optional<ExprList> solve_multipliers(const Lagrangian& L, const Characteristic& Q,
                                          const ConstraintSet& C,
                                          const std::vector<ExprList>& basis,
                                          const Signature& sig, const SampleConfig& cfg = {});

}  // namespace ddn
