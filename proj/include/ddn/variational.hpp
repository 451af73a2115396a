#pragma once

#include <optional>
#include <string>

#include "ddn/ddop.hpp"
#include "ddn/evaluate.hpp"
#include "ddn/expr.hpp"
#include "ddn/jet_ops.hpp"

namespace ddn {

// A differential-difference Lagrangian density; field variables only.
struct Lagrangian {
  Expr density;

  static Lagrangian make(Expr L, const Signature& sig);
};

// Conservation law candidate: density = D_i F^i + D_{n^i} G^i, zero on
// solutions of the attached system.
struct ConservationLaw {
  DivComponents components;
  Expr density;
};

// E_{u^a}(L) = sum (-D)_J S_{-K} dL/du^a_{J;K} over the coordinates present.
Expr euler_lagrange(const Expr& L, int alpha, const Signature& sig);

// Same, differentiating with respect to the arbitrary-function coordinates
// g^r_{J;K}; field coordinates are held fixed.
Expr euler_lagrange_wrt_arbitrary(const Expr& e, int r, const Signature& sig);

struct DivergenceVerdict {
  ZeroVerdict verdict;
  std::optional<int> failing_alpha;    // witness dependent variable on No
  std::vector<ZeroResult> per_alpha;
};

// Kernel criterion: e is a divergence iff every Euler-Lagrange operator
// annihilates it.
DivergenceVerdict is_divergence(const Expr& e, const Signature& sig,
                                const SampleConfig& cfg = {});

Expr divergence_of(const ConservationLaw& claw, const Signature& sig);

struct ClawReport {
  ZeroResult components_match;   // divergence of components == density
  ZeroResult vanishes_on_solutions;
  bool pass() const {
    return components_match.affirmative() && vanishes_on_solutions.affirmative();
  }
};

ClawReport verify_claw(const ConservationLaw& claw, const SolvedSystem& sys,
                       const Signature& sig, const SampleConfig& cfg = {});

enum class Triviality { Trivial, NotShownTrivial };

// Sufficient test on the given representative: every component restricts to
// zero on solutions.
Triviality triviality_check(const ConservationLaw& claw, const SolvedSystem& sys,
                            const Signature& sig, const SampleConfig& cfg = {});

}  // namespace ddn
