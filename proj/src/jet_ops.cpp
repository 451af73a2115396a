#include "ddn/jet_ops.hpp"

#include <algorithm>

namespace ddn {

namespace {

Expr derive_builtin(const Expr& e, const Expr& darg) {
  const Expr& arg = e.args()[0];
  switch (e.fn()) {
    case Fn::Ln:
      return Expr::div(darg, arg);
    case Fn::Exp:
      return Expr::builtin(Fn::Exp, arg) * darg;
    case Fn::Sin:
      return Expr::builtin(Fn::Cos, arg) * darg;
    case Fn::Cos:
      return -(Expr::builtin(Fn::Sin, arg) * darg);
    case Fn::Alt:
    case Fn::Floor:
      return Expr::integer(0);  // locally constant
  }
  fail(ErrorKind::Internal, "unhandled builtin derivative");
}

}  // namespace

Expr derive_raw(const Expr& e, const LeafRule& rule) {
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return Expr::integer(0);
    case Kind::IndepContinuous:
    case Kind::IndepDiscrete:
    case Kind::Param:
    case Kind::Jet:
      return rule(e);
    case Kind::Sum: {
      ExprList terms;
      for (const auto& t : e.args()) terms.push_back(derive_raw(t, rule));
      return Expr::sum(std::move(terms));
    }
    case Kind::Product: {
      ExprList terms;
      const auto& fs = e.args();
      for (size_t i = 0; i < fs.size(); ++i) {
        Expr d = derive_raw(fs[i], rule);
        if (d.is_zero_number()) continue;
        ExprList factors;
        for (size_t j = 0; j < fs.size(); ++j) factors.push_back(j == i ? d : fs[j]);
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case Kind::Power: {
      const Expr& base = e.args()[0];
      const Expr& expo = e.args()[1];
      Expr dbase = derive_raw(base, rule);
      Expr dexpo = derive_raw(expo, rule);
      if (dexpo.is_zero_number()) {
        if (dbase.is_zero_number()) return Expr::integer(0);
        // d(b^s) = s b^(s-1) b'
        Expr down = Expr::power(base, Expr::sub(expo, Expr::integer(1)));
        return expo * down * dbase;
      }
      // d(b^e) = b^e (e' ln b + e b'/b)
      Expr lnb = Expr::builtin(Fn::Ln, base);
      return e * (dexpo * lnb + Expr::div(expo * dbase, base));
    }
    case Kind::Builtin:
      return derive_builtin(e, derive_raw(e.args()[0], rule));
  }
  fail(ErrorKind::Internal, "unhandled node kind in derive");
}

Expr total_derivative(const Expr& e, int direction, const Signature& sig) {
  if (direction < 0 || direction >= sig.p())
    fail(ErrorKind::UndeclaredSymbol, "continuous direction out of range");
  LeafRule rule = [direction, &sig](const Expr& leaf) -> Expr {
    switch (leaf.kind()) {
      case Kind::IndepContinuous:
        return Expr::integer(leaf.var() == direction ? 1 : 0);
      case Kind::IndepDiscrete:
      case Kind::Param:
        return Expr::integer(0);
      case Kind::Jet: {
        JetVar jv = leaf.jet();
        if (jv.owner == JetVar::Owner::ArbitraryFn &&
            !sig.arbitrary[jv.index].dep_x[direction])
          return Expr::integer(0);
        jv.derivs[direction] += 1;
        return Expr::jet_var(std::move(jv));
      }
      default:
        fail(ErrorKind::Internal, "non-leaf in leaf rule");
    }
  };
  return normalize(derive_raw(e, rule), sig);
}

Expr partial_jet(const Expr& e, const JetVar& v, const Signature& sig) {
  LeafRule rule = [&v](const Expr& leaf) -> Expr {
    return Expr::integer(leaf.kind() == Kind::Jet && leaf.jet() == v ? 1 : 0);
  };
  return normalize(derive_raw(e, rule), sig);
}

namespace {

Expr shift_raw(const Expr& e, const std::vector<int>& K, const Signature& sig) {
  switch (e.kind()) {
    case Kind::IndepDiscrete:
      return Expr::sum({e, Expr::integer(K[e.var()])});
    case Kind::Jet: {
      JetVar jv = e.jet();
      for (int i = 0; i < sig.m(); ++i) {
        if (jv.owner == JetVar::Owner::ArbitraryFn && !sig.arbitrary[jv.index].dep_n[i])
          continue;  // shift acts trivially on this direction
        jv.shifts[i] += K[i];
      }
      return Expr::jet_var(std::move(jv));
    }
    case Kind::Sum:
    case Kind::Product:
    case Kind::Power:
    case Kind::Builtin: {
      ExprList args;
      args.reserve(e.args().size());
      for (const auto& a : e.args()) args.push_back(shift_raw(a, K, sig));
      if (e.kind() == Kind::Sum) return Expr::sum(std::move(args));
      if (e.kind() == Kind::Product) return Expr::product(std::move(args));
      if (e.kind() == Kind::Power) return Expr::power(args[0], args[1]);
      return Expr::builtin(e.fn(), args[0]);
    }
    default:
      return e;
  }
}

}  // namespace

Expr shift(const Expr& e, const std::vector<int>& K, const Signature& sig) {
  if (static_cast<int>(K.size()) != sig.m())
    fail(ErrorKind::ArityError, "shift multi-index length mismatch");
  return normalize(shift_raw(e, K, sig), sig);
}

Expr shift1(const Expr& e, int direction, int amount, const Signature& sig) {
  std::vector<int> K(sig.m(), 0);
  K.at(direction) = amount;
  return shift(e, K, sig);
}

Expr forward_difference(const Expr& e, int direction, const Signature& sig) {
  return normalize(Expr::sub(shift1(e, direction, 1, sig), e), sig);
}

Expr apply_derivatives(const Expr& e, const std::vector<int>& J, const Signature& sig) {
  Expr out = e;
  for (int i = 0; i < static_cast<int>(J.size()); ++i)
    for (int k = 0; k < J[i]; ++k) out = total_derivative(out, i, sig);
  return out;
}

namespace {

int cmp_int(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_lex(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

}  // namespace

int Ranking::compare(const JetVar& a, const JetVar& b) const {
  const int adj = a.deriv_order(), bdj = b.deriv_order();
  const int aks = a.shift_sum(), bks = b.shift_sum();
  int c = 0;
  switch (preset) {
    case Preset::TotalOrder:
      if ((c = cmp_int(adj + aks, bdj + bks))) return c;
      if ((c = cmp_int(adj, bdj))) return c;
      if ((c = cmp_lex(a.derivs, b.derivs))) return c;
      if ((c = cmp_lex(a.shifts, b.shifts))) return c;
      break;
    case Preset::DerivMajor:
      if ((c = cmp_int(adj, bdj))) return c;
      if ((c = cmp_lex(a.derivs, b.derivs))) return c;
      if ((c = cmp_int(aks, bks))) return c;
      if ((c = cmp_lex(a.shifts, b.shifts))) return c;
      break;
    case Preset::ShiftMajor:
      if ((c = cmp_int(aks, bks))) return c;
      if ((c = cmp_lex(a.shifts, b.shifts))) return c;
      if ((c = cmp_int(adj, bdj))) return c;
      if ((c = cmp_lex(a.derivs, b.derivs))) return c;
      break;
  }
  return cmp_int(a.index, b.index);
}

const char* Ranking::name() const {
  switch (preset) {
    case Preset::TotalOrder: return "default";
    case Preset::DerivMajor: return "deriv-major";
    case Preset::ShiftMajor: return "shift-major";
  }
  return "?";
}

namespace {

std::vector<JetVar> field_vars(const Expr& e) {
  std::vector<JetVar> out;
  for (auto& jv : collect_jet_vars(e))
    if (jv.owner == JetVar::Owner::Field) out.push_back(jv);
  return out;
}

bool contains_var(const Expr& e, const JetVar& v) {
  bool found = false;
  walk(e, [&](const Expr& n) { found = found || (n.kind() == Kind::Jet && n.jet() == v); });
  return found;
}

// True when a = D_J S_K b for some J >= 0 (any K).
bool is_prolongation_of(const JetVar& a, const JetVar& b) {
  if (a.owner != b.owner || a.index != b.index) return false;
  for (size_t i = 0; i < a.derivs.size(); ++i)
    if (a.derivs[i] < b.derivs[i]) return false;
  return true;
}

}  // namespace

SolvedSystem solve_for_leading(const std::vector<Expr>& system, const Ranking& ranking,
                               const Signature& sig) {
  SolvedSystem out;
  out.ranking = ranking;
  for (const Expr& raw : system) {
    Expr eq = normalize(raw, sig);
    auto vars = field_vars(eq);
    if (vars.empty()) fail(ErrorKind::NotSolvable, "equation has no field variables");
    JetVar leader = vars[0];
    for (const auto& v : vars)
      if (ranking.less(leader, v)) leader = v;
    Expr coeff = partial_jet(eq, leader, sig);
    if (contains_var(coeff, leader))
      fail(ErrorKind::NotSolvable,
           "leading variable " + to_string(leader, sig) + " enters nonlinearly");
    Expr remainder = normalize(Expr::sub(eq, coeff * Expr::jet_var(leader)), sig);
    if (contains_var(remainder, leader))
      fail(ErrorKind::NotSolvable,
           "equation is not affine in its leading variable " + to_string(leader, sig));
    Expr rhs = normalize(Expr::div(-remainder, coeff), sig);
    for (const auto& v : field_vars(rhs))
      if (!ranking.less(v, leader))
        fail(ErrorKind::NotSolvable, "solved right-hand side is not ranked below the leader");
    out.equations.push_back({leader, rhs});
  }
  for (size_t a = 0; a < out.equations.size(); ++a)
    for (size_t b = 0; b < out.equations.size(); ++b) {
      if (a == b) continue;
      if (is_prolongation_of(out.equations[a].leader, out.equations[b].leader))
        fail(ErrorKind::OverlappingLeaders,
             "leading variable " + to_string(out.equations[a].leader, sig) +
                 " is a prolongation of " + to_string(out.equations[b].leader, sig));
    }
  return out;
}

Expr restrict_to_solutions(const Expr& e, const SolvedSystem& sys, const Signature& sig,
                           long cap) {
  Expr cur = normalize(e, sig);
  if (sys.empty()) return cur;
  for (long iter = 0; iter < cap; ++iter) {
    bool found = false;
    JetVar best;
    const SolvedEquation* best_eq = nullptr;
    for (const auto& jv : field_vars(cur)) {
      for (const auto& eq : sys.equations) {
        if (!is_prolongation_of(jv, eq.leader)) continue;
        if (!found || sys.ranking.less(best, jv)) {
          best = jv;
          best_eq = &eq;
          found = true;
        }
        break;
      }
    }
    if (!found) return cur;
    std::vector<int> dk(best.shifts.size());
    for (size_t i = 0; i < dk.size(); ++i) dk[i] = best.shifts[i] - best_eq->leader.shifts[i];
    std::vector<int> dj(best.derivs.size());
    for (size_t i = 0; i < dj.size(); ++i) dj[i] = best.derivs[i] - best_eq->leader.derivs[i];
    Expr replacement = apply_derivatives(shift(best_eq->rhs, dk, sig), dj, sig);
    cur = normalize(substitute_jet(cur, best, replacement), sig);
  }
  fail(ErrorKind::NonTerminating,
       "substitution cap exceeded; the system violates its ranking on this expression");
}

}  // namespace ddn
