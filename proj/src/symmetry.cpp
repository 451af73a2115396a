#include "ddn/symmetry.hpp"

#include <algorithm>
#include <map>

#include "ddn/linsolve.hpp"

namespace ddn {

Characteristic Characteristic::zero(const Signature& sig) {
  Characteristic q;
  q.Q.assign(sig.q(), Expr::integer(0));
  return q;
}

Generator Generator::point(ExprList xi, ExprList phi, const Signature& sig,
                           std::optional<std::vector<int>> period) {
  if (static_cast<int>(xi.size()) != sig.p() || static_cast<int>(phi.size()) != sig.q())
    fail(ErrorKind::ArityError, "generator component count mismatch");
  for (const auto& f : phi)
    for (const auto& jv : collect_jet_vars(f)) {
      bool plain = jv.owner == JetVar::Owner::Field &&
                   std::all_of(jv.derivs.begin(), jv.derivs.end(), [](int j) { return j == 0; }) &&
                   std::all_of(jv.shifts.begin(), jv.shifts.end(), [](int k) { return k == 0; });
      if (!plain)
        fail(ErrorKind::StructureViolation,
             "point-mode phi may depend only on unshifted, underived u");
    }
  Generator g;
  g.mode = Mode::Point;
  g.xi = std::move(xi);
  g.phi = std::move(phi);
  g.period = std::move(period);
  for (auto& e : g.xi) e = normalize(e, sig);
  for (auto& e : g.phi) e = normalize(e, sig);
  return g;
}

Generator Generator::evolutionary(Characteristic q, const Signature& sig) {
  if (static_cast<int>(q.Q.size()) != sig.q())
    fail(ErrorKind::ArityError, "characteristic component count mismatch");
  Generator g;
  g.mode = Mode::Evolutionary;
  for (auto& e : q.Q) e = normalize(e, sig);
  g.evo = std::move(q);
  return g;
}

Characteristic characteristic_of(const Generator& v, const Signature& sig) {
  if (v.mode == Generator::Mode::Evolutionary) return v.evo;
  Characteristic q;
  for (int alpha = 0; alpha < sig.q(); ++alpha) {
    Expr acc = v.phi[alpha];
    for (int i = 0; i < sig.p(); ++i) {
      std::vector<int> J(sig.p(), 0);
      J[i] = 1;
      acc = acc - v.xi[i] * Expr::field(alpha, J, std::vector<int>(sig.m(), 0));
    }
    q.Q.push_back(normalize(acc, sig));
  }
  return q;
}

namespace {

struct ProlongCache {
  const Characteristic& q;
  const Signature& sig;
  std::map<JetVar, Expr, JetVarLess> memo;

  Expr lookup(const JetVar& jv) {
    auto it = memo.find(jv);
    if (it != memo.end()) return it->second;
    Expr val = apply_derivatives(q.Q[jv.index], jv.derivs, sig);
    val = shift(val, jv.shifts, sig);
    memo.emplace(jv, val);
    return val;
  }
};

}  // namespace

Expr prolong_apply(const Characteristic& q, const Expr& e, const Signature& sig) {
  if (static_cast<int>(q.Q.size()) != sig.q())
    fail(ErrorKind::ArityError, "characteristic component count mismatch");
  ProlongCache cache{q, sig, {}};
  LeafRule rule = [&cache](const Expr& leaf) -> Expr {
    if (leaf.kind() == Kind::Jet && leaf.jet().owner == JetVar::Owner::Field)
      return cache.lookup(leaf.jet());
    return Expr::integer(0);
  };
  return normalize(derive_raw(e, rule), sig);
}

Expr prolong_apply(const Generator& v, const Expr& e, const Signature& sig) {
  Expr evo_part = prolong_apply(characteristic_of(v, sig), e, sig);
  if (v.mode == Generator::Mode::Evolutionary) return evo_part;
  Expr acc = evo_part;
  for (int i = 0; i < sig.p(); ++i)
    if (!v.xi[i].is_zero_number()) acc = acc + v.xi[i] * total_derivative(e, i, sig);
  return normalize(acc, sig);
}

StructureResult structure_check(const Generator& v, const Signature& sig,
                                const SampleConfig& cfg) {
  if (v.mode == Generator::Mode::Evolutionary)
    return {StructureResult::Kind::PreservesFull, {}, ""};
  bool n_dependent = false;
  for (const auto& xi : v.xi) {
    if (contains_jet(xi))
      return {StructureResult::Kind::Fails, {}, "xi depends on dependent variables"};
    n_dependent = n_dependent || contains_discrete_dependence(xi);
  }
  if (!n_dependent) return {StructureResult::Kind::PreservesFull, {}, ""};
  if (!v.period)
    return {StructureResult::Kind::Fails, {},
            "xi depends on n but no sublattice period is declared"};
  const auto& r = *v.period;
  if (static_cast<int>(r.size()) != sig.m())
    fail(ErrorKind::ArityError, "period vector length mismatch");
  for (const auto& xi : v.xi) {
    for (int mu = 0; mu < sig.m(); ++mu) {
      Expr shifted = shift1(xi, mu, r[mu], sig);
      if (!is_zero(shifted - xi, sig, cfg).affirmative())
        return {StructureResult::Kind::Fails, {},
                "xi is not periodic with the declared sublattice period"};
    }
  }
  return {StructureResult::Kind::PreservesReduced, r, ""};
}

LscReport lsc_check(const std::vector<Expr>& system, const SolvedSystem& solved,
                    const Generator& v, const Signature& sig, const SampleConfig& cfg) {
  LscReport rep;
  rep.structure = structure_check(v, sig, cfg);
  if (rep.structure.kind == StructureResult::Kind::Fails)
    fail(ErrorKind::StructureViolation, rep.structure.reason);
  for (const auto& A : system) {
    Expr res = restrict_to_solutions(prolong_apply(v, A, sig), solved, sig);
    rep.per_equation.push_back(is_zero(res, sig, cfg));
  }
  return rep;
}

namespace {

// Arbitrary functions of all independent variables behave as additional
// dependent variables; only those enter the divergence kernel test.
std::vector<int> fully_dependent_arbitraries(const Expr& e, const Signature& sig) {
  std::vector<int> out;
  for (const auto& jv : collect_jet_vars(e)) {
    if (jv.owner != JetVar::Owner::ArbitraryFn) continue;
    const auto& decl = sig.arbitrary[jv.index];
    bool full = std::all_of(decl.dep_x.begin(), decl.dep_x.end(), [](bool b) { return b; }) &&
                std::all_of(decl.dep_n.begin(), decl.dep_n.end(), [](bool b) { return b; });
    if (full && std::find(out.begin(), out.end(), jv.index) == out.end())
      out.push_back(jv.index);
  }
  return out;
}

}  // namespace

VarsymReport varsym_check(const Lagrangian& L, const Characteristic& Q, const Signature& sig,
                          const SampleConfig& cfg) {
  VarsymReport rep;
  Expr pr = prolong_apply(Q, L.density, sig);
  for (int alpha = 0; alpha < sig.q(); ++alpha)
    rep.per_alpha.push_back(is_zero(euler_lagrange(pr, alpha, sig), sig, cfg));
  Expr qall = Expr::sum(ExprList(Q.Q));
  for (int r : fully_dependent_arbitraries(qall, sig))
    rep.per_arbitrary.emplace_back(r, is_zero(euler_lagrange_wrt_arbitrary(pr, r, sig), sig, cfg));
  return rep;
}

AnsatzProblem AnsatzProblem::variational(Lagrangian L) {
  AnsatzProblem p;
  p.lagrangian = std::move(L);
  return p;
}

AnsatzProblem AnsatzProblem::for_system(std::vector<Expr> system, SolvedSystem solved) {
  AnsatzProblem p;
  p.system = std::move(system);
  p.solved = std::move(solved);
  return p;
}

std::vector<Characteristic> ansatz_solve(const AnsatzProblem& problem,
                                         const std::vector<Characteristic>& basis,
                                         const Signature& sig, const SampleConfig& cfg) {
  if (basis.empty()) return {};
  const bool variational = problem.lagrangian.has_value();

  // Residual components per basis element; the full residual is linear in
  // the unknown coefficients.
  std::vector<ExprList> columns;
  for (const auto& b : basis) {
    ExprList comps;
    if (variational) {
      Expr pr = prolong_apply(b, problem.lagrangian->density, sig);
      for (int alpha = 0; alpha < sig.q(); ++alpha)
        comps.push_back(euler_lagrange(pr, alpha, sig));
      Expr qall = Expr::sum(ExprList(b.Q));
      for (int r = 0; r < sig.num_arbitrary(); ++r) {
        const auto& decl = sig.arbitrary[r];
        bool full =
            std::all_of(decl.dep_x.begin(), decl.dep_x.end(), [](bool x) { return x; }) &&
            std::all_of(decl.dep_n.begin(), decl.dep_n.end(), [](bool x) { return x; });
        if (full) comps.push_back(euler_lagrange_wrt_arbitrary(pr, r, sig));
      }
    } else {
      for (const auto& A : problem.system)
        comps.push_back(
            restrict_to_solutions(prolong_apply(b, A, sig), *problem.solved, sig));
    }
    columns.push_back(std::move(comps));
  }
  // Component counts must agree across columns; pad with zeros if an
  // arbitrary function appears in some basis elements only.
  size_t ncomp = 0;
  for (const auto& c : columns) ncomp = std::max(ncomp, c.size());
  for (auto& c : columns) c.resize(ncomp, Expr::integer(0));

  SampledSystem batch1 = sample_linear_system(columns, nullptr, sig, cfg, 0);
  SampledSystem batch2 = sample_linear_system(columns, nullptr, sig, cfg, 0x5151);
  int r1 = rank_of(batch1.rows);
  RatMatrix stacked = batch1.rows;
  stacked.insert(stacked.end(), batch2.rows.begin(), batch2.rows.end());
  int r2 = rank_of(stacked);
  if (r1 != r2)
    fail(ErrorKind::SamplingDegenerate,
         "sampled rank unstable across batches; enlarge the sample count");

  std::vector<Characteristic> verified;
  for (const auto& vec : nullspace(stacked)) {
    Characteristic cand = Characteristic::zero(sig);
    for (size_t k = 0; k < basis.size(); ++k) {
      if (vec[k] == 0) continue;
      for (int alpha = 0; alpha < sig.q(); ++alpha)
        cand.Q[alpha] = cand.Q[alpha] + Expr::number(vec[k]) * basis[k].Q[alpha];
    }
    for (auto& q : cand.Q) q = normalize(q, sig);
    bool ok = false;
    if (variational) {
      ok = varsym_check(*problem.lagrangian, cand, sig, cfg).pass();
    } else {
      Generator g = Generator::evolutionary(cand, sig);
      LscReport rep = lsc_check(problem.system, *problem.solved, g, sig, cfg);
      ok = rep.pass();
    }
    if (ok) verified.push_back(std::move(cand));
  }
  return verified;
}

}  // namespace ddn
