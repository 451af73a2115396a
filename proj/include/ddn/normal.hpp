#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ddn/expr.hpp"

namespace ddn {

// Internal canonical form: an expression is an expanded multivariate
// polynomial over "atoms" (jet variables, independent variables, parameters
// and opaque builtin applications), divided by a multiset of primitive
// polynomial factors.  normalize() round-trips an Expr through this form.
//
// Exact rewrites applied along the way:
//   alt(e + k)    -> (-1)^k alt(e)      for integer constants k
//   alt(sum c n)  -> alt(sum (c mod 2) n)  for integer-affine discrete args
//   alt(e)^2      -> 1
//   floor(e + c)  -> floor(e + frac(c)) + floor(c)
//   floor(affine integer combination of n) -> the combination itself
//   c^(e + k)     -> c^k * c^e          for rational c > 0, integer k
// Transcendental applications (ln, exp, sin, cos) stay opaque.

namespace detail {

// Monomial: atoms with positive integer exponents, sorted by expression
// order.  Exponents of alt(...) atoms are kept reduced mod 2 by poly_mul.
using Mono = std::vector<std::pair<Expr, int>>;

struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const;
};

struct Poly {
  std::map<Mono, Rat, MonoLess> terms;  // no zero coefficients

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  Rat constant_value() const;  // requires is_constant()
};

struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const;
};

Poly poly_const(const Rat& c);
Poly poly_atom(const Expr& atom);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, long e);
Poly poly_scale(const Poly& a, const Rat& c);

// Exact division in the free polynomial ring; nullopt when not divisible.
std::optional<Poly> poly_divide_exact(const Poly& num, const Poly& div);

// Splits p = c * prim where prim has coprime integer coefficients and a
// positive leading coefficient.  Requires p nonzero.
std::pair<Rat, Poly> poly_content(const Poly& p);

struct RatForm {
  Poly num;
  std::map<Poly, int, PolyLess> den;  // primitive non-constant factors, exp >= 1
};

RatForm to_ratform(const Expr& e);
Expr from_ratform(const RatForm& rf);

}  // namespace detail

// Canonical form.  Idempotent; throws UndeclaredSymbol/ArityError on
// expressions that are ill-formed against the signature.
Expr normalize(const Expr& e, const Signature& sig);

// True when the normalized expression is the literal zero.
bool is_syntactic_zero(const Expr& normalized);

// Atoms with exact integer semantics (alt, floor) but nontrivial relations
// to the discrete variables; their presence rules out the "nonzero normal
// form implies nonzero function" shortcut.
bool contains_floor_alt(const Expr& e);

}  // namespace ddn
