#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ddn/error.hpp"
#include "ddn/numeric.hpp"

namespace ddn {

// A jet-space coordinate u^a_{J;K}: the J-th derivative of the K-th shift of
// dependent variable a.  ArbitraryFn coordinates play the same role for the
// arbitrary functions g^r that appear in gauge characteristics.
struct JetVar {
  enum class Owner { Field, ArbitraryFn };

  Owner owner = Owner::Field;
  int index = 0;            // which dependent variable / arbitrary function
  std::vector<int> derivs;  // multi-index J, length p, entries >= 0
  std::vector<int> shifts;  // multi-index K, length m, entries in Z

  int deriv_order() const;  // |J|
  int shift_sum() const;    // sum of K entries (signed)

  friend bool operator==(const JetVar& a, const JetVar& b) {
    return a.owner == b.owner && a.index == b.index && a.derivs == b.derivs &&
           a.shifts == b.shifts;
  }
};

int compare(const JetVar& a, const JetVar& b);

// Declares which independent variables an arbitrary function depends on.
// A function of x only has all discrete dependence flags false; shifts then
// act trivially on it and its shift multi-index stays pinned at zero.
struct ArbitraryFnDecl {
  std::string name;
  std::vector<bool> dep_x;  // length p
  std::vector<bool> dep_n;  // length m
};

// Names and arities of a problem's variables.  Every Expr is interpreted
// against one of these.
struct Signature {
  std::vector<std::string> continuous;  // x^i, p >= 1
  std::vector<std::string> discrete;    // n^i, m >= 1
  std::vector<std::string> dependent;   // u^a, q >= 1
  std::vector<ArbitraryFnDecl> arbitrary;
  std::vector<std::string> parameters;  // symbolic constants

  int p() const { return static_cast<int>(continuous.size()); }
  int m() const { return static_cast<int>(discrete.size()); }
  int q() const { return static_cast<int>(dependent.size()); }
  int num_arbitrary() const { return static_cast<int>(arbitrary.size()); }

  std::optional<int> find_continuous(const std::string& name) const;
  std::optional<int> find_discrete(const std::string& name) const;
  std::optional<int> find_dependent(const std::string& name) const;
  std::optional<int> find_arbitrary(const std::string& name) const;
  std::optional<int> find_parameter(const std::string& name) const;
};

enum class Kind {
  Integer,
  Rational,
  IndepContinuous,
  IndepDiscrete,
  Param,
  Jet,
  Builtin,
  Power,
  Product,
  Sum,
};

enum class Fn { Ln, Exp, Sin, Cos, Floor, Alt };

const char* fn_name(Fn f);
std::optional<Fn> fn_from_name(const std::string& s);

class Expr;
using ExprList = std::vector<Expr>;

struct Node {
  Kind kind;
  Rat value;       // Integer / Rational
  int var = 0;     // IndepContinuous / IndepDiscrete / Param index
  JetVar jet;      // Jet
  Fn fn = Fn::Ln;  // Builtin
  ExprList args;   // Sum/Product children, Power {base, exponent}, Builtin args
};

// Immutable expression handle.  Structural constructors below keep the cheap
// syntactic invariants (flat sorted Sum/Product, folded numeric constants);
// the full canonical form is normalize() in normal.hpp.
class Expr {
 public:
  Expr() : Expr(integer(0)) {}

  Kind kind() const { return node_->kind; }
  const Rat& value() const { return node_->value; }
  int var() const { return node_->var; }
  const JetVar& jet() const { return node_->jet; }
  Fn fn() const { return node_->fn; }
  const ExprList& args() const { return node_->args; }

  bool is_number() const { return kind() == Kind::Integer || kind() == Kind::Rational; }
  bool is_integer_value(long v) const { return is_number() && node_->value == v; }
  bool is_zero_number() const { return is_integer_value(0); }

  // Leaves.
  static Expr integer(long v) { return number(Rat(v)); }
  static Expr number(Rat v);
  static Expr indep_continuous(int i);
  static Expr indep_discrete(int i);
  static Expr param(int i);
  static Expr jet_var(JetVar jv);
  static Expr field(int alpha, std::vector<int> derivs, std::vector<int> shifts);
  static Expr arbitrary(int r, std::vector<int> derivs, std::vector<int> shifts);

  // Compound nodes.  sum/product flatten, sort and fold constants; they do
  // not merge like terms (that is normalize's job).
  static Expr sum(ExprList terms);
  static Expr product(ExprList factors);
  static Expr power(Expr base, Expr exponent);
  static Expr builtin(Fn f, Expr arg);

  static Expr neg(Expr e) { return product({integer(-1), std::move(e)}); }
  static Expr sub(Expr a, Expr b) { return sum({std::move(a), neg(std::move(b))}); }
  static Expr div(Expr a, Expr b) {
    return product({std::move(a), power(std::move(b), integer(-1))});
  }
  static Expr pow_int(Expr base, long e) { return power(std::move(base), integer(e)); }

  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sub(a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator-(const Expr& a) { return neg(a); }

  const Node& node() const { return *node_; }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

  std::shared_ptr<const Node> node_;
};

// Fixed total order on nodes; drives canonical sorting of Sum/Product
// children.  Returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);
inline bool structurally_equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Pre-order traversal over every node, including Builtin arguments and Power
// exponents.
void walk(const Expr& e, const std::function<void(const Expr&)>& fn);

// All distinct jet variables occurring in e, in canonical order.
std::vector<JetVar> collect_jet_vars(const Expr& e);
bool contains_jet(const Expr& e);
bool contains_arbitrary(const Expr& e);
bool contains_discrete_dependence(const Expr& e);  // any n^i node
bool contains_transcendental(const Expr& e);       // ln/exp/sin/cos or opaque power

// Replaces every occurrence of a specific jet variable.
Expr substitute_jet(const Expr& e, const JetVar& target, const Expr& replacement);

// Checks indices/arities against the signature; throws UndeclaredSymbol /
// ArityError on violation.
void validate(const Expr& e, const Signature& sig);

std::string to_string(const Expr& e, const Signature& sig);
std::string to_string(const JetVar& jv, const Signature& sig);

}  // namespace ddn
