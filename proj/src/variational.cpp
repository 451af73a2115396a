#include "ddn/variational.hpp"

namespace ddn {

Lagrangian Lagrangian::make(Expr L, const Signature& sig) {
  if (contains_arbitrary(L))
    fail(ErrorKind::ArityError, "a Lagrangian may not contain arbitrary-function symbols");
  return Lagrangian{normalize(L, sig)};
}

namespace {

Expr euler_lagrange_impl(const Expr& e, JetVar::Owner owner, int index, const Signature& sig) {
  Expr n = normalize(e, sig);
  ExprList terms;
  for (const auto& jv : collect_jet_vars(n)) {
    if (jv.owner != owner || jv.index != index) continue;
    Expr partial = partial_jet(n, jv, sig);
    if (partial.is_zero_number()) continue;
    std::vector<int> negK(jv.shifts.size());
    for (size_t i = 0; i < negK.size(); ++i) negK[i] = -jv.shifts[i];
    Expr term = apply_derivatives(shift(partial, negK, sig), jv.derivs, sig);
    int sign = jv.deriv_order() % 2 == 0 ? 1 : -1;
    terms.push_back(sign == 1 ? term : -term);
  }
  return normalize(Expr::sum(std::move(terms)), sig);
}

}  // namespace

Expr euler_lagrange(const Expr& L, int alpha, const Signature& sig) {
  if (alpha < 0 || alpha >= sig.q())
    fail(ErrorKind::UndeclaredSymbol, "dependent variable index out of range");
  return euler_lagrange_impl(L, JetVar::Owner::Field, alpha, sig);
}

Expr euler_lagrange_wrt_arbitrary(const Expr& e, int r, const Signature& sig) {
  if (r < 0 || r >= sig.num_arbitrary())
    fail(ErrorKind::UndeclaredSymbol, "arbitrary function index out of range");
  return euler_lagrange_impl(e, JetVar::Owner::ArbitraryFn, r, sig);
}

DivergenceVerdict is_divergence(const Expr& e, const Signature& sig, const SampleConfig& cfg) {
  if (contains_arbitrary(e))
    fail(ErrorKind::ArityError, "divergence test expects field variables only");
  DivergenceVerdict out;
  out.verdict = ZeroVerdict::Yes;
  for (int alpha = 0; alpha < sig.q(); ++alpha) {
    ZeroResult r = is_zero(euler_lagrange(e, alpha, sig), sig, cfg);
    out.per_alpha.push_back(r);
    if (r.verdict == ZeroVerdict::No) {
      out.verdict = ZeroVerdict::No;
      if (!out.failing_alpha) out.failing_alpha = alpha;
    } else if (r.verdict == ZeroVerdict::ProbablyYes && out.verdict == ZeroVerdict::Yes) {
      out.verdict = ZeroVerdict::ProbablyYes;
    }
  }
  return out;
}

Expr divergence_of(const ConservationLaw& claw, const Signature& sig) {
  return divergence_expr(claw.components, sig);
}

ClawReport verify_claw(const ConservationLaw& claw, const SolvedSystem& sys,
                       const Signature& sig, const SampleConfig& cfg) {
  ClawReport rep;
  rep.components_match = is_zero(divergence_of(claw, sig) - claw.density, sig, cfg);
  rep.vanishes_on_solutions = is_zero(restrict_to_solutions(claw.density, sys, sig), sig, cfg);
  return rep;
}

Triviality triviality_check(const ConservationLaw& claw, const SolvedSystem& sys,
                            const Signature& sig, const SampleConfig& cfg) {
  for (const auto& f : claw.components.F)
    if (!is_zero(restrict_to_solutions(f, sys, sig), sig, cfg).affirmative())
      return Triviality::NotShownTrivial;
  for (const auto& g : claw.components.G)
    if (!is_zero(restrict_to_solutions(g, sys, sig), sig, cfg).affirmative())
      return Triviality::NotShownTrivial;
  return Triviality::Trivial;
}

}  // namespace ddn
