#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ddn/noether.hpp"
#include "ddn/symmetry.hpp"

namespace ddn {

// Parses the expression language:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | name | name '[' ints '|' ints ']' | fn '(' args ')'
//           | '(' expr ')'
// Jet tokens v[J|K] carry comma-separated multi-indices sized by the
// signature; a bare dependent/arbitrary name means the unshifted, underived
// coordinate.  Functions: ln exp sin cos floor alt pow.
Expr parse_expr(const std::string& text, const Signature& sig);

// Operator language: '*'-separated letters and coefficient factors, e.g.
//   Dx, Dt^2, Dn, S, S^-1, S[-1], S[1,2], id, (x^2)*Dx, alt(n)*S
// D<name> is the total derivative along a continuous variable or the
// forward difference along a discrete one.
LinearDDOperator parse_operator(const std::string& text, const Signature& sig);

struct Problem {
  Signature sig;
  Ranking ranking;
  std::optional<std::vector<int>> period;
  std::optional<Expr> lagrangian;
  std::vector<Expr> system;
  std::vector<std::pair<std::string, Generator>> generators;
  std::vector<std::pair<std::string, Characteristic>> characteristics;
  std::vector<std::pair<std::string, ConservationLaw>> claws;
  std::optional<ConstraintSet> constraints;
  std::vector<std::pair<std::string, ExprList>> multipliers;
  std::vector<std::pair<std::string, RelationCertificate>> certificates;

  const Generator* find_generator(const std::string& name) const;
  const Characteristic* find_characteristic(const std::string& name) const;
  const ConservationLaw* find_claw(const std::string& name) const;
  const ExprList* find_multiplier(const std::string& name) const;
  const RelationCertificate* find_certificate(const std::string& name) const;

  Lagrangian lagrangian_or_fail() const;
  SolvedSystem solve() const;  // system solved under the declared ranking
};

// Problem files: '#' comments, blocks introduced by the keywords
//   vars: ranking: period: lagrangian: system: generator <name>:
//   characteristic <name>: claw <name>: constraints: multiplier <name>:
//   certificate <name>:
Problem parse_problem(const std::string& text);
Problem parse_problem_file(const std::string& path);

// Canonical emission; parse(print(parse(t))) == parse(t).
std::string print_problem(const Problem& p);

}  // namespace ddn
