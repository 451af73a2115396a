#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ddn/expr.hpp"
#include "ddn/normal.hpp"

namespace ddn {

struct JetVarLess {
  bool operator()(const JetVar& a, const JetVar& b) const { return compare(a, b) < 0; }
};

// A full assignment: rationals for jet variables, continuous variables and
// parameters, integers for the discrete variables.  `atoms` optionally
// assigns values to whole opaque subtrees (transcendental applications),
// which then evaluate to the stored rational instead of recursing; the
// sampling-based linear solver uses this to stay in exact arithmetic.
struct Point {
  std::map<JetVar, Rat, JetVarLess> jets;
  std::vector<Rat> xs;
  std::vector<long> ns;
  std::vector<Rat> params;
  std::map<Expr, Rat, ExprLess> atoms;

  std::string describe(const Signature& sig) const;
};

using NumVal = std::variant<Rat, Real>;

Real to_real(const NumVal& v, long precision);

// Evaluates at a point.  Exact rational when the expression is rational in
// its leaves (alt and floor evaluate exactly); otherwise computed in MPFR
// round-to-nearest at the given precision.  Throws DomainError on ln of a
// non-positive value, 0 to a negative power, or alt of a non-integer.
NumVal evaluate(const Expr& e, const Signature& sig, const Point& pt, long precision);

struct SampleConfig {
  std::uint64_t seed = 0;
  int samples = 8;
  long precision = 128;     // MPFR bits
  double tolerance = 1e-25; // relative
  int window = 3;           // discrete variables sweep [-window, window]
  long magnitude = 10000;   // numerators/denominators drawn from [1, magnitude]
  int retries = 32;         // resampling cap for singular points
};

enum class ZeroVerdict { Yes, ProbablyYes, No };

struct ZeroResult {
  ZeroVerdict verdict;
  double confidence = 1.0;           // for ProbablyYes
  std::optional<Point> witness;      // for No
  std::string note;

  bool affirmative() const { return verdict != ZeroVerdict::No; }
};

const char* to_string(ZeroVerdict v);

// Probabilistic identity test.  Yes iff the canonical form is the literal
// zero (sound: a nonzero rational expression is never reported Yes).  A
// nonzero canonical form built purely from free coordinates is an exact No;
// anything involving alt/floor/transcendentals is settled by seeded sampling.
ZeroResult is_zero(const Expr& e, const Signature& sig, const SampleConfig& cfg = {});

}  // namespace ddn
