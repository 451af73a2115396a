#include "ddn/expr.hpp"

#include <algorithm>
#include <sstream>

namespace ddn {

int JetVar::deriv_order() const {
  int s = 0;
  for (int j : derivs) s += j;
  return s;
}

int JetVar::shift_sum() const {
  int s = 0;
  for (int k : shifts) s += k;
  return s;
}

namespace {

int cmp_long(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_vec(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return cmp_long(static_cast<long>(a.size()), static_cast<long>(b.size()));
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Integer: return 0;
    case Kind::Rational: return 1;
    case Kind::IndepContinuous: return 2;
    case Kind::IndepDiscrete: return 3;
    case Kind::Param: return 4;
    case Kind::Jet: return 5;
    case Kind::Builtin: return 6;
    case Kind::Power: return 7;
    case Kind::Product: return 8;
    case Kind::Sum: return 9;
  }
  return 10;
}

}  // namespace

int compare(const JetVar& a, const JetVar& b) {
  if (a.owner != b.owner) return a.owner == JetVar::Owner::Field ? -1 : 1;
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  if (int c = cmp_vec(a.derivs, b.derivs)) return c;
  return cmp_vec(a.shifts, b.shifts);
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Ln: return "ln";
    case Fn::Exp: return "exp";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Floor: return "floor";
    case Fn::Alt: return "alt";
  }
  return "?";
}

std::optional<Fn> fn_from_name(const std::string& s) {
  for (Fn f : {Fn::Ln, Fn::Exp, Fn::Sin, Fn::Cos, Fn::Floor, Fn::Alt})
    if (s == fn_name(f)) return f;
  return std::nullopt;
}

namespace {

std::optional<int> find_name(const std::vector<std::string>& names, const std::string& name) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

}  // namespace

std::optional<int> Signature::find_continuous(const std::string& name) const {
  return find_name(continuous, name);
}
std::optional<int> Signature::find_discrete(const std::string& name) const {
  return find_name(discrete, name);
}
std::optional<int> Signature::find_dependent(const std::string& name) const {
  return find_name(dependent, name);
}
std::optional<int> Signature::find_parameter(const std::string& name) const {
  return find_name(parameters, name);
}
std::optional<int> Signature::find_arbitrary(const std::string& name) const {
  for (size_t i = 0; i < arbitrary.size(); ++i)
    if (arbitrary[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

Expr Expr::number(Rat v) {
  v.canonicalize();
  Node n;
  n.kind = is_integer(v) ? Kind::Integer : Kind::Rational;
  n.value = std::move(v);
  return make(std::move(n));
}

Expr Expr::indep_continuous(int i) {
  Node n;
  n.kind = Kind::IndepContinuous;
  n.var = i;
  return make(std::move(n));
}

Expr Expr::indep_discrete(int i) {
  Node n;
  n.kind = Kind::IndepDiscrete;
  n.var = i;
  return make(std::move(n));
}

Expr Expr::param(int i) {
  Node n;
  n.kind = Kind::Param;
  n.var = i;
  return make(std::move(n));
}

Expr Expr::jet_var(JetVar jv) {
  Node n;
  n.kind = Kind::Jet;
  n.jet = std::move(jv);
  return make(std::move(n));
}

Expr Expr::field(int alpha, std::vector<int> derivs, std::vector<int> shifts) {
  return jet_var(JetVar{JetVar::Owner::Field, alpha, std::move(derivs), std::move(shifts)});
}

Expr Expr::arbitrary(int r, std::vector<int> derivs, std::vector<int> shifts) {
  return jet_var(JetVar{JetVar::Owner::ArbitraryFn, r, std::move(derivs), std::move(shifts)});
}

Expr Expr::sum(ExprList terms) {
  ExprList flat;
  Rat constant(0);
  for (auto& t : terms) {
    if (t.kind() == Kind::Sum) {
      for (const auto& c : t.args()) {
        if (c.is_number())
          constant += c.value();
        else
          flat.push_back(c);
      }
    } else if (t.is_number()) {
      constant += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (constant != 0) flat.push_back(number(constant));
  std::sort(flat.begin(), flat.end(), ExprLess{});
  if (flat.empty()) return integer(0);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = Kind::Sum;
  n.args = std::move(flat);
  return make(std::move(n));
}

Expr Expr::product(ExprList factors) {
  ExprList flat;
  Rat constant(1);
  for (auto& f : factors) {
    if (f.kind() == Kind::Product) {
      for (const auto& c : f.args()) {
        if (c.is_number())
          constant *= c.value();
        else
          flat.push_back(c);
      }
    } else if (f.is_number()) {
      constant *= f.value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (constant == 0) return integer(0);
  if (constant != 1) flat.push_back(number(constant));
  std::sort(flat.begin(), flat.end(), ExprLess{});
  if (flat.empty()) return integer(1);
  if (flat.size() == 1) return flat[0];
  Node n;
  n.kind = Kind::Product;
  n.args = std::move(flat);
  return make(std::move(n));
}

Expr Expr::power(Expr base, Expr exponent) {
  if (exponent.is_integer_value(1)) return base;
  if (exponent.is_integer_value(0)) return integer(1);
  if (base.is_number() && exponent.kind() == Kind::Integer) {
    const Rat& b = base.value();
    if (b != 0 || exponent.value() > 0) {
      long e = exponent.value().get_num().get_si();
      if (mpz_fits_slong_p(exponent.value().get_num().get_mpz_t()))
        return number(rat_pow(b, e));
    }
  }
  if (base.is_integer_value(1)) return integer(1);
  Node n;
  n.kind = Kind::Power;
  n.args = {std::move(base), std::move(exponent)};
  return make(std::move(n));
}

Expr Expr::builtin(Fn f, Expr arg) {
  Node n;
  n.kind = Kind::Builtin;
  n.fn = f;
  n.args = {std::move(arg)};
  return make(std::move(n));
}

int compare(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return 0;
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return cmp(a.value(), b.value()) < 0 ? -1 : (cmp(a.value(), b.value()) > 0 ? 1 : 0);
    case Kind::IndepContinuous:
    case Kind::IndepDiscrete:
    case Kind::Param:
      return cmp_long(a.var(), b.var());
    case Kind::Jet:
      return compare(a.jet(), b.jet());
    case Kind::Builtin: {
      if (a.fn() != b.fn()) return static_cast<int>(a.fn()) < static_cast<int>(b.fn()) ? -1 : 1;
      break;
    }
    default:
      break;
  }
  const auto& xs = a.args();
  const auto& ys = b.args();
  if (xs.size() != ys.size())
    return cmp_long(static_cast<long>(xs.size()), static_cast<long>(ys.size()));
  for (size_t i = 0; i < xs.size(); ++i)
    if (int c = compare(xs[i], ys[i])) return c;
  return 0;
}

void walk(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& a : e.args()) walk(a, fn);
}

std::vector<JetVar> collect_jet_vars(const Expr& e) {
  std::vector<JetVar> out;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Kind::Jet) out.push_back(n.jet());
  });
  std::sort(out.begin(), out.end(),
            [](const JetVar& a, const JetVar& b) { return compare(a, b) < 0; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool contains_jet(const Expr& e) {
  bool found = false;
  walk(e, [&](const Expr& n) { found = found || n.kind() == Kind::Jet; });
  return found;
}

bool contains_arbitrary(const Expr& e) {
  bool found = false;
  walk(e, [&](const Expr& n) {
    found = found || (n.kind() == Kind::Jet && n.jet().owner == JetVar::Owner::ArbitraryFn);
  });
  return found;
}

bool contains_discrete_dependence(const Expr& e) {
  bool found = false;
  walk(e, [&](const Expr& n) { found = found || n.kind() == Kind::IndepDiscrete; });
  return found;
}

bool contains_transcendental(const Expr& e) {
  bool found = false;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Kind::Builtin && n.fn() != Fn::Alt && n.fn() != Fn::Floor) found = true;
    if (n.kind() == Kind::Power && n.args()[1].kind() != Kind::Integer) found = true;
  });
  return found;
}

Expr substitute_jet(const Expr& e, const JetVar& target, const Expr& replacement) {
  switch (e.kind()) {
    case Kind::Jet:
      return e.jet() == target ? replacement : e;
    case Kind::Sum:
    case Kind::Product:
    case Kind::Power:
    case Kind::Builtin: {
      ExprList args;
      args.reserve(e.args().size());
      bool changed = false;
      for (const auto& a : e.args()) {
        Expr s = substitute_jet(a, target, replacement);
        changed = changed || compare(s, a) != 0;
        args.push_back(std::move(s));
      }
      if (!changed) return e;
      if (e.kind() == Kind::Sum) return Expr::sum(std::move(args));
      if (e.kind() == Kind::Product) return Expr::product(std::move(args));
      if (e.kind() == Kind::Power) return Expr::power(args[0], args[1]);
      return Expr::builtin(e.fn(), args[0]);
    }
    default:
      return e;
  }
}

void validate(const Expr& e, const Signature& sig) {
  walk(e, [&](const Expr& n) {
    switch (n.kind()) {
      case Kind::IndepContinuous:
        if (n.var() < 0 || n.var() >= sig.p())
          fail(ErrorKind::UndeclaredSymbol, "continuous variable index out of range");
        break;
      case Kind::IndepDiscrete:
        if (n.var() < 0 || n.var() >= sig.m())
          fail(ErrorKind::UndeclaredSymbol, "discrete variable index out of range");
        break;
      case Kind::Param:
        if (n.var() < 0 || n.var() >= static_cast<int>(sig.parameters.size()))
          fail(ErrorKind::UndeclaredSymbol, "parameter index out of range");
        break;
      case Kind::Jet: {
        const JetVar& jv = n.jet();
        if (static_cast<int>(jv.derivs.size()) != sig.p() ||
            static_cast<int>(jv.shifts.size()) != sig.m())
          fail(ErrorKind::ArityError, "jet multi-index length mismatch");
        for (int j : jv.derivs)
          if (j < 0) fail(ErrorKind::ArityError, "negative derivative multi-index");
        if (jv.owner == JetVar::Owner::Field) {
          if (jv.index < 0 || jv.index >= sig.q())
            fail(ErrorKind::UndeclaredSymbol, "dependent variable index out of range");
        } else {
          if (jv.index < 0 || jv.index >= sig.num_arbitrary())
            fail(ErrorKind::UndeclaredSymbol, "arbitrary function index out of range");
          const auto& decl = sig.arbitrary[jv.index];
          for (int i = 0; i < sig.p(); ++i)
            if (!decl.dep_x[i] && jv.derivs[i] != 0)
              fail(ErrorKind::ArityError,
                   decl.name + " does not depend on " + sig.continuous[i]);
          for (int i = 0; i < sig.m(); ++i)
            if (!decl.dep_n[i] && jv.shifts[i] != 0)
              fail(ErrorKind::ArityError, decl.name + " does not depend on " + sig.discrete[i]);
        }
        break;
      }
      default:
        break;
    }
  });
}

namespace {

// Printing uses the same grammar the parser accepts, so parse/print round
// trips are exact.
enum Prec { PREC_SUM = 0, PREC_PROD = 1, PREC_NEG = 2, PREC_POW = 3, PREC_ATOM = 4 };

void print(std::ostringstream& os, const Expr& e, const Signature& sig, int parent_prec);

void print_paren(std::ostringstream& os, const Expr& e, const Signature& sig, int prec,
                 int parent_prec) {
  if (prec < parent_prec) {
    os << '(';
    print(os, e, sig, PREC_SUM);
    os << ')';
  } else {
    print(os, e, sig, prec);
  }
}

bool is_negative_number(const Expr& e) { return e.is_number() && e.value() < 0; }

void print(std::ostringstream& os, const Expr& e, const Signature& sig, int parent_prec) {
  switch (e.kind()) {
    case Kind::Integer:
      if (e.value() < 0 && parent_prec > PREC_SUM) {
        os << '(' << e.value().get_num().get_str() << ')';
      } else {
        os << e.value().get_num().get_str();
      }
      break;
    case Kind::Rational: {
      bool paren = parent_prec > PREC_PROD || e.value() < 0;
      if (paren) os << '(';
      os << e.value().get_num().get_str() << '/' << e.value().get_den().get_str();
      if (paren) os << ')';
      break;
    }
    case Kind::IndepContinuous:
      os << sig.continuous[e.var()];
      break;
    case Kind::IndepDiscrete:
      os << sig.discrete[e.var()];
      break;
    case Kind::Param:
      os << sig.parameters[e.var()];
      break;
    case Kind::Jet:
      os << to_string(e.jet(), sig);
      break;
    case Kind::Builtin:
      os << fn_name(e.fn()) << '(';
      print(os, e.args()[0], sig, PREC_SUM);
      os << ')';
      break;
    case Kind::Power: {
      bool paren = parent_prec > PREC_POW;
      if (paren) os << '(';
      print_paren(os, e.args()[0], sig, PREC_ATOM, PREC_ATOM);
      os << '^';
      const Expr& ex = e.args()[1];
      if (ex.kind() == Kind::Integer && ex.value() >= 0) {
        os << ex.value().get_num().get_str();
      } else {
        os << '(';
        print(os, ex, sig, PREC_SUM);
        os << ')';
      }
      if (paren) os << ')';
      break;
    }
    case Kind::Product: {
      bool paren = parent_prec > PREC_PROD;
      // A leading -1 factor prints as unary minus.
      const auto& fs = e.args();
      size_t start = 0;
      bool neg = false;
      Rat coeff(1);
      if (fs[0].is_number()) {
        coeff = fs[0].value();
        start = 1;
        if (coeff < 0) {
          neg = true;
          coeff = -coeff;
        }
      }
      if (neg && parent_prec > PREC_PROD) paren = true;
      if (paren) os << '(';
      if (neg) os << '-';
      bool first = true;
      if (start == 1 && coeff != 1) {
        print(os, Expr::number(coeff), sig, PREC_PROD);
        first = false;
      }
      for (size_t i = start; i < fs.size(); ++i) {
        if (!first) os << '*';
        print_paren(os, fs[i], sig, PREC_POW, PREC_PROD + 1);
        first = false;
      }
      if (first) os << '1';
      if (paren) os << ')';
      break;
    }
    case Kind::Sum: {
      bool paren = parent_prec > PREC_SUM;
      if (paren) os << '(';
      bool first = true;
      for (const auto& t : e.args()) {
        bool neg = false;
        Expr term = t;
        if (t.kind() == Kind::Product && t.args()[0].is_number() && t.args()[0].value() < 0) {
          ExprList fs = t.args();
          fs[0] = Expr::number(-fs[0].value());
          term = Expr::product(std::move(fs));
          neg = true;
        } else if (is_negative_number(t)) {
          term = Expr::number(-t.value());
          neg = true;
        }
        if (!first) os << (neg ? " - " : " + ");
        else if (neg) os << '-';
        print(os, term, sig, PREC_PROD);
        first = false;
      }
      if (paren) os << ')';
      break;
    }
  }
}

}  // namespace

std::string to_string(const JetVar& jv, const Signature& sig) {
  std::ostringstream os;
  if (jv.owner == JetVar::Owner::Field)
    os << sig.dependent[jv.index];
  else
    os << sig.arbitrary[jv.index].name;
  bool all_zero = true;
  for (int j : jv.derivs) all_zero = all_zero && j == 0;
  for (int k : jv.shifts) all_zero = all_zero && k == 0;
  if (all_zero) return os.str();
  os << '[';
  for (size_t i = 0; i < jv.derivs.size(); ++i) {
    if (i) os << ',';
    os << jv.derivs[i];
  }
  os << '|';
  for (size_t i = 0; i < jv.shifts.size(); ++i) {
    if (i) os << ',';
    os << jv.shifts[i];
  }
  os << ']';
  return os.str();
}

std::string to_string(const Expr& e, const Signature& sig) {
  std::ostringstream os;
  print(os, e, sig, PREC_SUM);
  return os.str();
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorKind::SingularSample: return "SingularSample";
    case ErrorKind::NonEvaluable: return "NonEvaluable";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotSolvable: return "NotSolvable";
    case ErrorKind::OverlappingLeaders: return "OverlappingLeaders";
    case ErrorKind::NonTerminating: return "NonTerminating";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::NotVariational: return "NotVariational";
    case ErrorKind::DecompositionIncomplete: return "DecompositionIncomplete";
    case ErrorKind::NotLinearHomogeneous: return "NotLinearHomogeneous";
    case ErrorKind::RelationNonzero: return "RelationNonzero";
    case ErrorKind::SamplingDegenerate: return "SamplingDegenerate";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ArityError: return "ArityError";
    case ErrorKind::Internal: return "Internal";
  }
  return "Error";
}

}  // namespace ddn
