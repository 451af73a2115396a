#include "ddn/normal.hpp"

#include <algorithm>

namespace ddn {
namespace detail {

namespace {

bool is_alt_atom(const Expr& atom) {
  return atom.kind() == Kind::Builtin && atom.fn() == Fn::Alt;
}

int mono_degree(const Mono& m) {
  int d = 0;
  for (const auto& [a, e] : m) d += e;
  return d;
}

}  // namespace

bool MonoLess::operator()(const Mono& a, const Mono& b) const {
  int da = mono_degree(a), db = mono_degree(b);
  if (da != db) return da < db;
  // Lexicographic sparse walk; atoms ascend in expression order within each
  // monomial, so the first differing atom decides.
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    int c = compare(a[i].first, b[j].first);
    if (c < 0) return false;  // a has a smaller atom with positive exponent -> a larger
    if (c > 0) return true;
    if (a[i].second != b[j].second) return a[i].second < b[j].second;
    ++i;
    ++j;
  }
  return i == a.size() && j < b.size();
}

bool Poly::is_constant() const {
  return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
}

Rat Poly::constant_value() const {
  if (terms.empty()) return Rat(0);
  return terms.begin()->second;
}

bool PolyLess::operator()(const Poly& a, const Poly& b) const {
  if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size();
  auto i = a.terms.begin();
  auto j = b.terms.begin();
  MonoLess mless;
  for (; i != a.terms.end(); ++i, ++j) {
    if (mless(i->first, j->first)) return true;
    if (mless(j->first, i->first)) return false;
    int c = cmp(i->second, j->second);
    if (c != 0) return c < 0;
  }
  return false;
}

Poly poly_const(const Rat& c) {
  Poly p;
  if (c != 0) p.terms.emplace(Mono{}, c);
  return p;
}

Poly poly_atom(const Expr& atom) {
  Poly p;
  p.terms.emplace(Mono{{atom, 1}}, Rat(1));
  return p;
}

namespace {

void add_term(Poly& p, const Mono& m, const Rat& c) {
  auto it = p.terms.find(m);
  if (it == p.terms.end()) {
    if (c != 0) p.terms.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) p.terms.erase(it);
}

// Merges atom exponents; exponents of alt(...) atoms are reduced mod 2
// (alt(n)^2 == 1 identically on integer arguments).
Mono mono_mul(const Mono& a, const Mono& b, bool* vanished_sign_irrelevant) {
  (void)vanished_sign_irrelevant;
  Mono out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  auto push = [&](const Expr& atom, int e) {
    if (is_alt_atom(atom)) e = ((e % 2) + 2) % 2;
    if (e != 0) out.emplace_back(atom, e);
  };
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && compare(a[i].first, b[j].first) < 0)) {
      push(a[i].first, a[i].second);
      ++i;
    } else if (i == a.size() || compare(b[j].first, a[i].first) < 0) {
      push(b[j].first, b[j].second);
      ++j;
    } else {
      push(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) add_term(out, m, c);
  return out;
}

Poly poly_neg(const Poly& a) {
  Poly out;
  for (const auto& [m, c] : a.terms) out.terms.emplace(m, -c);
  return out;
}

Poly poly_scale(const Poly& a, const Rat& c) {
  Poly out;
  if (c == 0) return out;
  for (const auto& [m, k] : a.terms) out.terms.emplace(m, k * c);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) add_term(out, mono_mul(ma, mb, nullptr), ca * cb);
  return out;
}

Poly poly_pow(const Poly& a, long e) {
  Poly out = poly_const(Rat(1));
  Poly base = a;
  while (e > 0) {
    if (e & 1) out = poly_mul(out, base);
    base = (e >>= 1) ? poly_mul(base, base) : base;
  }
  return out;
}

namespace {

// Strict divisibility in the free ring: exponents subtract and must stay
// nonnegative (no mod-2 shortcut here; see header note on alt in factors).
std::optional<Mono> mono_divide(const Mono& num, const Mono& den) {
  Mono out;
  size_t i = 0;
  for (const auto& [atom, e] : den) {
    while (i < num.size() && compare(num[i].first, atom) < 0) {
      out.push_back(num[i]);
      ++i;
    }
    if (i == num.size() || compare(num[i].first, atom) != 0 || num[i].second < e)
      return std::nullopt;
    if (num[i].second > e) out.emplace_back(num[i].first, num[i].second - e);
    ++i;
  }
  for (; i < num.size(); ++i) out.push_back(num[i]);
  return out;
}

}  // namespace

std::optional<Poly> poly_divide_exact(const Poly& num, const Poly& div) {
  if (div.is_zero()) return std::nullopt;
  Poly rem = num;
  Poly quot;
  const auto& dlead = *div.terms.rbegin();
  while (!rem.is_zero()) {
    const auto& rlead = *rem.terms.rbegin();
    auto qm = mono_divide(rlead.first, dlead.first);
    if (!qm) return std::nullopt;
    Rat qc = rlead.second / dlead.second;
    Poly t;
    t.terms.emplace(*qm, qc);
    quot = poly_add(quot, t);
    rem = poly_add(rem, poly_neg(poly_mul(t, div)));
  }
  return quot;
}

std::pair<Rat, Poly> poly_content(const Poly& p) {
  Int num_gcd(0), den_lcm(1);
  for (const auto& [m, c] : p.terms) {
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rat content(num_gcd, den_lcm);
  content.canonicalize();
  // Sign convention: the leading (largest-monomial) coefficient is positive.
  if (p.terms.rbegin()->second < 0) content = -content;
  Poly prim;
  for (const auto& [m, c] : p.terms) prim.terms.emplace(m, c / content);
  return {content, prim};
}

namespace {

// Folds a polynomial into the denominator multiset.  Single-monomial factors
// split into per-atom entries; the returned rational is the constant that
// must multiply the numerator to keep the value unchanged.
Rat push_den_factor(std::map<Poly, int, PolyLess>& den, const Poly& f, int e) {
  auto [content, prim] = poly_content(f);
  Rat mult = rat_pow(Rat(1) / content, e);
  if (prim.is_constant()) return mult;  // fully absorbed into the constant
  if (prim.terms.size() == 1) {
    const Mono& m = prim.terms.begin()->first;
    for (const auto& [atom, k] : m) den[poly_atom(atom)] += e * k;
    return mult;
  }
  den[prim] += e;
  return mult;
}

void reduce(RatForm& rf) {
  if (rf.num.is_zero()) {
    rf.den.clear();
    return;
  }
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (auto it = rf.den.begin(); it != rf.den.end();) {
      bool erased = false;
      while (it->second > 0) {
        auto q = poly_divide_exact(rf.num, it->first);
        if (!q) break;
        rf.num = std::move(*q);
        --it->second;
        progressed = true;
      }
      if (it->second == 0) {
        it = rf.den.erase(it);
        erased = true;
      }
      if (!erased) ++it;
    }
  }
}

RatForm rf_const(const Rat& c) { return RatForm{poly_const(c), {}}; }

RatForm rf_atom(const Expr& atom) { return RatForm{poly_atom(atom), {}}; }

RatForm rf_mul(const RatForm& a, const RatForm& b) {
  RatForm out;
  out.num = poly_mul(a.num, b.num);
  out.den = a.den;
  Rat mult(1);
  for (const auto& [f, e] : b.den) mult *= push_den_factor(out.den, f, e);
  out.num = poly_scale(out.num, mult);
  reduce(out);
  return out;
}

RatForm rf_add(const RatForm& a, const RatForm& b) {
  RatForm out;
  // Common denominator: per-factor max exponent.
  out.den = a.den;
  for (const auto& [f, e] : b.den) {
    auto it = out.den.find(f);
    if (it == out.den.end())
      out.den.emplace(f, e);
    else
      it->second = std::max(it->second, e);
  }
  auto lift = [&](const RatForm& x) {
    Poly n = x.num;
    for (const auto& [f, e] : out.den) {
      auto it = x.den.find(f);
      int missing = e - (it == x.den.end() ? 0 : it->second);
      if (missing > 0) n = poly_mul(n, poly_pow(f, missing));
    }
    return n;
  };
  out.num = poly_add(lift(a), lift(b));
  reduce(out);
  return out;
}

RatForm rf_reciprocal(const RatForm& a) {
  if (a.num.is_zero()) fail(ErrorKind::DomainError, "division by zero expression");
  RatForm out;
  out.num = poly_const(Rat(1));
  for (const auto& [f, e] : a.den) out.num = poly_mul(out.num, poly_pow(f, e));
  Rat mult = push_den_factor(out.den, a.num, 1);
  out.num = poly_scale(out.num, mult);
  reduce(out);
  return out;
}

RatForm rf_pow(const RatForm& a, long e) {
  if (e == 0) return rf_const(Rat(1));
  const RatForm base = e < 0 ? rf_reciprocal(a) : a;
  long k = e < 0 ? -e : e;
  RatForm out;
  out.num = poly_pow(base.num, k);
  for (const auto& [f, x] : base.den) out.den.emplace(f, x * static_cast<int>(k));
  reduce(out);
  return out;
}

// --- builtin/power atom canonicalization ------------------------------------

struct SumSplit {
  Rat constant;
  ExprList rest;  // non-constant terms
};

SumSplit split_constant(const Expr& canonical) {
  SumSplit out;
  out.constant = 0;
  auto take = [&](const Expr& t) {
    if (t.is_number())
      out.constant += t.value();
    else
      out.rest.push_back(t);
  };
  if (canonical.kind() == Kind::Sum)
    for (const auto& t : canonical.args()) take(t);
  else
    take(canonical);
  return out;
}

// e as sum of c_i * n_i with integer c_i; nullopt otherwise.
std::optional<std::vector<std::pair<int, Int>>> integer_affine_discrete(const ExprList& terms) {
  std::vector<std::pair<int, Int>> out;
  for (const auto& t : terms) {
    if (t.kind() == Kind::IndepDiscrete) {
      out.emplace_back(t.var(), Int(1));
    } else if (t.kind() == Kind::Product && t.args().size() == 2 &&
               t.args()[0].kind() == Kind::Integer &&
               t.args()[1].kind() == Kind::IndepDiscrete) {
      out.emplace_back(t.args()[1].var(), Int(t.args()[0].value().get_num()));
    } else {
      return std::nullopt;
    }
  }
  return out;
}

RatForm canonicalize_alt(const Expr& arg_canonical) {
  SumSplit s = split_constant(arg_canonical);
  Rat sign(1);
  bool constant_extracted = false;
  if (is_integer(s.constant)) {
    constant_extracted = true;  // alt(e + k) = (-1)^k alt(e)
    if (mpz_odd_p(s.constant.get_num().get_mpz_t())) sign = -1;
  } else if (s.rest.empty()) {
    fail(ErrorKind::DomainError, "alt of non-integer constant");
  }
  if (constant_extracted) {
    if (auto affine = integer_affine_discrete(s.rest)) {
      ExprList reduced;
      for (auto& [var, coeff] : *affine) {
        Int c2 = ((coeff % 2) + 2) % 2;
        if (c2 != 0) reduced.push_back(Expr::indep_discrete(var));
      }
      if (reduced.empty()) return rf_const(sign);
      Expr atom = Expr::builtin(Fn::Alt, Expr::sum(std::move(reduced)));
      RatForm rf = rf_atom(atom);
      rf.num = poly_scale(rf.num, sign);
      return rf;
    }
  }
  ExprList inner = s.rest;
  if (!constant_extracted && s.constant != 0) inner.push_back(Expr::number(s.constant));
  Expr atom = Expr::builtin(Fn::Alt, Expr::sum(std::move(inner)));
  RatForm rf = rf_atom(atom);
  rf.num = poly_scale(rf.num, sign);
  return rf;
}

RatForm canonicalize_floor(const Expr& arg_canonical) {
  SumSplit s = split_constant(arg_canonical);
  if (s.rest.empty()) return rf_const(Rat(rat_floor(s.constant)));
  Int k = rat_floor(s.constant);
  Rat frac = s.constant - Rat(k);
  if (frac == 0) {
    if (auto affine = integer_affine_discrete(s.rest)) {
      // floor of an integer-valued expression is the expression itself.
      RatForm out = rf_const(Rat(k));
      for (auto& [var, coeff] : *affine) {
        RatForm term = rf_atom(Expr::indep_discrete(var));
        term.num = poly_scale(term.num, Rat(coeff));
        out = rf_add(out, term);
      }
      return out;
    }
  }
  ExprList inner = s.rest;
  if (frac != 0) inner.push_back(Expr::number(frac));
  Expr atom = Expr::builtin(Fn::Floor, Expr::sum(std::move(inner)));
  RatForm out = rf_atom(atom);
  return rf_add(out, rf_const(Rat(k)));
}

// b^(p/q) for rational b, exact when b's numerator and denominator are both
// perfect q-th powers.
std::optional<Rat> exact_rational_power(const Rat& base, const Rat& expo) {
  if (base <= 0) return std::nullopt;
  const Int& p = expo.get_num();
  const Int& q = expo.get_den();
  if (!mpz_fits_slong_p(p.get_mpz_t()) || !mpz_fits_ulong_p(q.get_mpz_t())) return std::nullopt;
  unsigned long qe = q.get_ui();
  Int rn, rd;
  if (!mpz_root(rn.get_mpz_t(), base.get_num().get_mpz_t(), qe)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), base.get_den().get_mpz_t(), qe)) return std::nullopt;
  Rat root(rn, rd);
  root.canonicalize();
  return rat_pow(root, p.get_si());
}

RatForm canonicalize_power(const Expr& base_c, const Expr& expo_c) {
  if (base_c.is_integer_value(1)) return rf_const(Rat(1));
  if (base_c.is_zero_number()) return rf_const(Rat(0));  // 0^e with symbolic e
  if (expo_c.is_number() && base_c.is_number()) {
    if (auto v = exact_rational_power(base_c.value(), expo_c.value())) return rf_const(*v);
    return rf_atom(Expr::power(base_c, expo_c));
  }
  if (base_c.is_number() && base_c.value() > 0) {
    SumSplit s = split_constant(expo_c);
    if (!s.rest.empty() && is_integer(s.constant) && s.constant != 0 &&
        mpz_fits_slong_p(s.constant.get_num().get_mpz_t())) {
      Rat scale = rat_pow(base_c.value(), s.constant.get_num().get_si());
      Expr atom = Expr::power(base_c, Expr::sum(std::move(s.rest)));
      RatForm rf = rf_atom(atom);
      rf.num = poly_scale(rf.num, scale);
      return rf;
    }
  }
  return rf_atom(Expr::power(base_c, expo_c));
}

}  // namespace

RatForm to_ratform(const Expr& e) {
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return rf_const(e.value());
    case Kind::IndepContinuous:
    case Kind::IndepDiscrete:
    case Kind::Param:
    case Kind::Jet:
      return rf_atom(e);
    case Kind::Sum: {
      RatForm out = rf_const(Rat(0));
      for (const auto& t : e.args()) out = rf_add(out, to_ratform(t));
      return out;
    }
    case Kind::Product: {
      RatForm out = rf_const(Rat(1));
      for (const auto& f : e.args()) {
        if (out.num.is_zero()) return out;
        out = rf_mul(out, to_ratform(f));
      }
      return out;
    }
    case Kind::Power: {
      RatForm ee = to_ratform(e.args()[1]);
      if (ee.den.empty() && ee.num.is_constant() && is_integer(ee.num.constant_value())) {
        const Rat& c = ee.num.constant_value();
        if (!mpz_fits_slong_p(c.get_num().get_mpz_t()))
          fail(ErrorKind::Internal, "integer exponent out of range");
        return rf_pow(to_ratform(e.args()[0]), c.get_num().get_si());
      }
      return canonicalize_power(from_ratform(to_ratform(e.args()[0])), from_ratform(ee));
    }
    case Kind::Builtin: {
      Expr arg = from_ratform(to_ratform(e.args()[0]));
      switch (e.fn()) {
        case Fn::Alt:
          return canonicalize_alt(arg);
        case Fn::Floor:
          return canonicalize_floor(arg);
        case Fn::Ln:
          if (arg.is_integer_value(1)) return rf_const(Rat(0));
          break;
        case Fn::Exp:
          if (arg.is_zero_number()) return rf_const(Rat(1));
          break;
        case Fn::Sin:
          if (arg.is_zero_number()) return rf_const(Rat(0));
          break;
        case Fn::Cos:
          if (arg.is_zero_number()) return rf_const(Rat(1));
          break;
      }
      return rf_atom(Expr::builtin(e.fn(), arg));
    }
  }
  fail(ErrorKind::Internal, "unhandled node kind");
}

namespace {

Expr mono_to_expr(const Mono& m, const Rat& coeff) {
  ExprList factors;
  if (coeff != 1 || m.empty()) factors.push_back(Expr::number(coeff));
  for (const auto& [atom, e] : m)
    factors.push_back(e == 1 ? atom : Expr::pow_int(atom, e));
  return Expr::product(std::move(factors));
}

Expr poly_to_expr(const Poly& p) {
  if (p.is_zero()) return Expr::integer(0);
  ExprList terms;
  for (const auto& [m, c] : p.terms) terms.push_back(mono_to_expr(m, c));
  return Expr::sum(std::move(terms));
}

}  // namespace

Expr from_ratform(const RatForm& rf) {
  Expr num = poly_to_expr(rf.num);
  if (rf.den.empty()) return num;
  ExprList factors{num};
  for (const auto& [f, e] : rf.den)
    factors.push_back(Expr::pow_int(poly_to_expr(f), -e));
  return Expr::product(std::move(factors));
}

}  // namespace detail

Expr normalize(const Expr& e, const Signature& sig) {
  validate(e, sig);
  return detail::from_ratform(detail::to_ratform(e));
}

bool is_syntactic_zero(const Expr& normalized) { return normalized.is_zero_number(); }

bool contains_floor_alt(const Expr& e) {
  bool found = false;
  walk(e, [&](const Expr& n) {
    if (n.kind() == Kind::Builtin && (n.fn() == Fn::Alt || n.fn() == Fn::Floor)) found = true;
  });
  return found;
}

}  // namespace ddn
