#include "ddn/noether.hpp"

#include <algorithm>

#include "ddn/linsolve.hpp"

namespace ddn {

Expr noether_density(const Lagrangian& L, const Characteristic& Q, const Signature& sig) {
  ExprList terms;
  for (int alpha = 0; alpha < sig.q(); ++alpha)
    terms.push_back(Q.Q[alpha] * euler_lagrange(L.density, alpha, sig));
  return normalize(Expr::sum(std::move(terms)), sig);
}

DivComponents noether_ibp_components(const Lagrangian& L, const Characteristic& Q,
                                     const Signature& sig) {
  DivComponents acc = DivComponents::zeros(sig);
  Expr Ln = normalize(L.density, sig);
  for (const auto& jv : collect_jet_vars(Ln)) {
    if (jv.owner != JetVar::Owner::Field) continue;
    Expr partial = partial_jet(Ln, jv, sig);
    if (partial.is_zero_number()) continue;
    LinearDDOperator word{{OpTerm{Expr::integer(1), jv.derivs, jv.shifts}}};
    acc = div_add(acc, adjoint_defect(word, partial, Q.Q[jv.index], sig), sig);
  }
  return acc;
}

NoetherClaw noether_claw(const Lagrangian& L, const Characteristic& Q, const Signature& sig,
                         const SampleConfig& cfg, const std::optional<DivComponents>& P) {
  if (!varsym_check(L, Q, sig, cfg).pass())
    fail(ErrorKind::NotVariational, "characteristic is not a variational symmetry");

  DivComponents ibp = noether_ibp_components(L, Q, sig);  // div = pr v_Q(L) - Q E(L)
  Expr pr = prolong_apply(Q, L.density, sig);

  NoetherClaw out;
  out.surplus = pr;
  out.claw.density = noether_density(L, Q, sig);
  if (P) {
    ZeroResult chk = is_zero(divergence_expr(*P, sig) - pr, sig, cfg);
    if (!chk.affirmative())
      fail(ErrorKind::DecompositionIncomplete,
           "supplied P does not decompose pr v_Q(L)");
    out.claw.components = div_add(*P, div_negate(ibp, sig), sig);
    return out;
  }
  if (pr.is_zero_number()) {
    out.claw.components = div_negate(ibp, sig);
    return out;
  }
  fail(ErrorKind::DecompositionIncomplete,
       "pr v_Q(L) is a nonzero divergence; supply its components P to assemble the law");
}

bool is_linear_homogeneous_in_arbitrary(const Expr& e, const Signature& sig) {
  Expr n = normalize(e, sig);
  if (!contains_arbitrary(n)) return false;
  detail::RatForm rf = detail::to_ratform(n);
  for (const auto& [f, exp] : rf.den)
    for (const auto& [m, c] : f.terms)
      for (const auto& [atom, k] : m)
        if (contains_arbitrary(atom)) return false;
  for (const auto& [m, c] : rf.num.terms) {
    int gdeg = 0;
    for (const auto& [atom, k] : m) {
      if (atom.kind() == Kind::Jet && atom.jet().owner == JetVar::Owner::ArbitraryFn)
        gdeg += k;
      else if (contains_arbitrary(atom))
        return false;  // g buried inside an opaque atom
    }
    if (gdeg != 1) return false;
  }
  return true;
}

Noether2Result noether2_relations(const Lagrangian& L, const Characteristic& Q,
                                  const Signature& sig, const SampleConfig& cfg) {
  Expr qall = Expr::sum(ExprList(Q.Q));
  if (!is_linear_homogeneous_in_arbitrary(qall, sig))
    fail(ErrorKind::NotLinearHomogeneous,
         "characteristic is not linear homogeneous in the arbitrary functions");

  ExprList el;
  for (int alpha = 0; alpha < sig.q(); ++alpha)
    el.push_back(euler_lagrange(L.density, alpha, sig));

  Noether2Result out;
  std::vector<bool> seen(sig.num_arbitrary(), false);
  for (const auto& jv : collect_jet_vars(qall))
    if (jv.owner == JetVar::Owner::ArbitraryFn) seen[jv.index] = true;
  for (int r = 0; r < sig.num_arbitrary(); ++r) {
    if (!seen[r]) continue;
    // D^a_r = adjoint of sum_{J,K} (dQ^a/dg^r_{J;K}) D_J S_K, so that the
    // relation reads  sum_a D^a_r (E_{u^a}(L)) == 0.
    RelationCertificate cert;
    ExprList terms;
    for (int alpha = 0; alpha < sig.q(); ++alpha) {
      LinearDDOperator base;
      for (const auto& jv : collect_jet_vars(Q.Q[alpha])) {
        if (jv.owner != JetVar::Owner::ArbitraryFn || jv.index != r) continue;
        Expr coeff = partial_jet(Q.Q[alpha], jv, sig);
        if (coeff.is_zero_number()) continue;
        base.terms.push_back(OpTerm{coeff, jv.derivs, jv.shifts});
      }
      cert.ops.push_back(op_adjoint(op_normalize(base, sig), sig));
      cert.targets.push_back(el[alpha]);
      cert.target_labels.push_back("EL[" + sig.dependent[alpha] + "]");
      terms.push_back(op_apply(cert.ops.back(), el[alpha], sig));
    }
    Expr rel = normalize(Expr::sum(std::move(terms)), sig);
    if (contains_arbitrary(rel))
      fail(ErrorKind::Internal, "relation expression is not free of arbitrary functions");
    ZeroResult check = is_zero(rel, sig, cfg);
    if (check.verdict == ZeroVerdict::No)
      fail(ErrorKind::RelationNonzero,
           "relation for " + sig.arbitrary[r].name +
               " is nonzero; Q is not a gauge variational symmetry" +
               (check.witness ? " (witness: " + check.witness->describe(sig) + ")" : ""));
    out.function_indices.push_back(r);
    out.certificates.push_back(std::move(cert));
    out.relations.push_back(rel);
    out.verified.push_back(check);
  }
  return out;
}

void ConstraintSet::validate(const Signature& sig) const {
  for (const auto& row : ops) {
    if (static_cast<int>(row.size()) != num_functions())
      fail(ErrorKind::ArityError, "ragged constraint matrix");
    for (const auto& op : row)
      for (const auto& t : op.terms)
        if (contains_jet(t.coeff))
          fail(ErrorKind::ArityError,
               "constraint operator coefficients must depend on (x, n) only");
  }
  if (!functions.empty() && static_cast<int>(functions.size()) != num_functions())
    fail(ErrorKind::ArityError, "constraint function map length mismatch");
  for (int r = 0; r < num_functions(); ++r)
    if (function_index(r) < 0 || function_index(r) >= sig.num_arbitrary())
      fail(ErrorKind::UndeclaredSymbol, "constraint refers to an undeclared function");
}

IntermediateReport intermediate_determining(const Lagrangian& L, const Characteristic& Q,
                                            const ConstraintSet& C, const ExprList& lambda,
                                            const Signature& sig, const SampleConfig& cfg) {
  C.validate(sig);
  if (static_cast<int>(lambda.size()) != C.num_constraints())
    fail(ErrorKind::ArityError, "multiplier count does not match constraint count");
  Expr density = noether_density(L, Q, sig);
  IntermediateReport rep;
  for (int r = 0; r < C.num_functions(); ++r) {
    Expr lhs = euler_lagrange_wrt_arbitrary(density, C.function_index(r), sig);
    for (int i = 0; i < C.num_constraints(); ++i)
      lhs = lhs + op_apply(op_adjoint(C.ops[i][r], sig), lambda[i], sig);
    rep.per_function.push_back(is_zero(lhs, sig, cfg));
  }
  return rep;
}

ConservationLaw constrained_claw(const ConstraintSet& C, const ExprList& lambda,
                                 const std::optional<ExprList>& g_instances,
                                 const Signature& sig) {
  C.validate(sig);
  ExprList g;
  if (g_instances) {
    g = *g_instances;
  } else {
    for (int r = 0; r < C.num_functions(); ++r)
      g.push_back(Expr::arbitrary(C.function_index(r), std::vector<int>(sig.p(), 0),
                                  std::vector<int>(sig.m(), 0)));
  }
  if (static_cast<int>(g.size()) != C.num_functions())
    fail(ErrorKind::ArityError, "instantiation count does not match constraint matrix");

  ConservationLaw claw;
  claw.components = DivComponents::zeros(sig);
  ExprList density_terms;
  for (int i = 0; i < C.num_constraints(); ++i) {
    for (int r = 0; r < C.num_functions(); ++r) {
      const LinearDDOperator& op = C.ops[i][r];
      if (op.terms.empty()) continue;
      claw.components = div_add(claw.components, adjoint_defect(op, lambda[i], g[r], sig), sig);
      density_terms.push_back(lambda[i] * op_apply(op, g[r], sig));
      density_terms.push_back(-(g[r] * op_apply(op_adjoint(op, sig), lambda[i], sig)));
    }
  }
  claw.density = normalize(Expr::sum(std::move(density_terms)), sig);
  return claw;
}

ZeroResult relation_verify(const RelationCertificate& cert, const Signature& sig,
                           const SampleConfig& cfg) {
  if (cert.ops.size() != cert.targets.size())
    fail(ErrorKind::ArityError, "certificate operator/target count mismatch");
  for (const auto& op : cert.ops)
    for (const auto& t : op.terms)
      if (contains_arbitrary(t.coeff))
        fail(ErrorKind::ArityError,
             "certificate coefficients may not involve arbitrary functions");
  ExprList terms;
  for (size_t l = 0; l < cert.ops.size(); ++l)
    terms.push_back(op_apply(cert.ops[l], cert.targets[l], sig));
  return is_zero(Expr::sum(std::move(terms)), sig, cfg);
}

Characteristic adjoint_characteristic(const std::vector<std::vector<LinearDDOperator>>& ops,
                                      const ExprList& g, const Signature& sig) {
  if (static_cast<int>(ops.size()) != sig.q())
    fail(ErrorKind::ArityError, "expected one operator row per dependent variable");
  Characteristic q = Characteristic::zero(sig);
  for (int alpha = 0; alpha < sig.q(); ++alpha) {
    if (ops[alpha].size() != g.size())
      fail(ErrorKind::ArityError, "operator/function count mismatch");
    Expr acc = Expr::integer(0);
    for (size_t r = 0; r < g.size(); ++r)
      acc = acc + op_apply(op_adjoint(ops[alpha][r], sig), g[r], sig);
    q.Q[alpha] = normalize(acc, sig);
  }
  return q;
}

LinearDDOperator gauge_relation_operator(const Characteristic& Q, const ExprList& targets,
                                         int r, const Signature& sig) {
  LinearDDOperator op;
  for (size_t alpha = 0; alpha < Q.Q.size(); ++alpha) {
    for (const auto& jv : collect_jet_vars(Q.Q[alpha])) {
      if (jv.owner != JetVar::Owner::ArbitraryFn || jv.index != r) continue;
      Expr coeff = normalize(partial_jet(Q.Q[alpha], jv, sig) * targets[alpha], sig);
      if (coeff.is_zero_number()) continue;
      op.terms.push_back(OpTerm{coeff, jv.derivs, jv.shifts});
    }
  }
  return op_normalize(op, sig);
}

ConservationLaw gauge_trivial_claw(const Lagrangian& L, const Characteristic& Q,
                                   const Signature& sig) {
  Expr qall = Expr::sum(ExprList(Q.Q));
  if (!is_linear_homogeneous_in_arbitrary(qall, sig))
    fail(ErrorKind::NotLinearHomogeneous,
         "characteristic is not linear homogeneous in the arbitrary functions");

  ExprList el;
  for (int alpha = 0; alpha < sig.q(); ++alpha)
    el.push_back(euler_lagrange(L.density, alpha, sig));

  ConservationLaw claw;
  claw.components = DivComponents::zeros(sig);
  claw.density = noether_density(L, Q, sig);
  for (int r = 0; r < sig.num_arbitrary(); ++r) {
    LinearDDOperator op = gauge_relation_operator(Q, el, r, sig);
    if (op.terms.empty()) continue;
    Expr g = Expr::arbitrary(r, std::vector<int>(sig.p(), 0), std::vector<int>(sig.m(), 0));
    claw.components = div_add(claw.components, adjoint_defect(op, Expr::integer(1), g, sig), sig);
  }
  return claw;
}

std::optional<ExprList> solve_multipliers(const Lagrangian& L, const Characteristic& Q,
                                          const ConstraintSet& C,
                                          const std::vector<ExprList>& basis,
                                          const Signature& sig, const SampleConfig& cfg) {
  if (basis.empty()) return std::nullopt;
  C.validate(sig);
  const int I = C.num_constraints();
  const int R = C.num_functions();
  Expr density = noether_density(L, Q, sig);

  // Column k: the determining-equation contribution of basis vector k;
  // constant column: the relation part.
  std::vector<ExprList> columns;
  for (const auto& cand : basis) {
    if (static_cast<int>(cand.size()) != I)
      fail(ErrorKind::ArityError, "multiplier basis vector has wrong length");
    ExprList comps;
    for (int r = 0; r < R; ++r) {
      Expr acc = Expr::integer(0);
      for (int i = 0; i < I; ++i)
        acc = acc + op_apply(op_adjoint(C.ops[i][r], sig), cand[i], sig);
      comps.push_back(normalize(acc, sig));
    }
    columns.push_back(std::move(comps));
  }
  ExprList constant;
  for (int r = 0; r < R; ++r)
    constant.push_back(euler_lagrange_wrt_arbitrary(density, C.function_index(r), sig));

  SampledSystem s = sample_linear_system(columns, &constant, sig, cfg);
  RatVec rhs;
  for (auto& c : s.constants) rhs.push_back(-c);
  auto sol = solve_affine(s.rows, rhs);
  if (!sol) return std::nullopt;

  ExprList lambda(I, Expr::integer(0));
  for (size_t k = 0; k < basis.size(); ++k) {
    if ((*sol)[k] == 0) continue;
    for (int i = 0; i < I; ++i)
      lambda[i] = lambda[i] + Expr::number((*sol)[k]) * basis[k][i];
  }
  for (auto& l : lambda) l = normalize(l, sig);
  if (!intermediate_determining(L, Q, C, lambda, sig, cfg).pass()) return std::nullopt;
  return lambda;
}

}  // namespace ddn
