#include "ddn/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ddn {

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  explicit Cursor(const std::string& t) : text(t) {}

  bool eof() const { return pos >= text.size(); }
  char peek() const { return eof() ? '\0' : text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::SyntaxError,
         msg + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  }

  bool consume(char c) {
    skip_ws();
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& what) {
    if (!consume(c)) error("expected '" + std::string(1, c) + "' " + what);
  }

  std::string name() {
    skip_ws();
    if (eof() || (!std::isalpha(static_cast<unsigned char>(peek())) && peek() != '_'))
      error("expected a name");
    std::string out;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      out.push_back(advance());
    return out;
  }

  long integer() {
    skip_ws();
    bool negative = consume('-');
    skip_ws();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) error("expected an integer");
    long v = 0;
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek())))
      v = v * 10 + (advance() - '0');
    return negative ? -v : v;
  }
};

class ExprParser {
 public:
  ExprParser(Cursor& cur, const Signature& sig) : cur_(cur), sig_(sig) {}

  Expr parse() {
    Expr e = sum();
    return e;
  }

  Expr sum() {
    Expr acc = term();
    while (true) {
      cur_.skip_ws();
      if (cur_.peek() == '+') {
        cur_.advance();
        acc = acc + term();
      } else if (cur_.peek() == '-') {
        cur_.advance();
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  Expr term() {
    Expr acc = factor();
    while (true) {
      cur_.skip_ws();
      if (cur_.peek() == '*') {
        cur_.advance();
        acc = acc * factor();
      } else if (cur_.peek() == '/') {
        cur_.advance();
        acc = Expr::div(acc, factor());
      } else {
        return acc;
      }
    }
  }

  Expr factor() {
    cur_.skip_ws();
    if (cur_.peek() == '-') {
      cur_.advance();
      return -factor();
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    cur_.skip_ws();
    if (cur_.peek() == '^') {
      cur_.advance();
      return Expr::power(base, factor());
    }
    return base;
  }

  Expr atom() {
    cur_.skip_ws();
    if (cur_.eof()) cur_.error("unexpected end of expression");
    char c = cur_.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr::integer(cur_.integer());
    if (c == '(') {
      cur_.advance();
      Expr e = sum();
      cur_.expect(')', "to close a parenthesized expression");
      return e;
    }
    std::string id = cur_.name();
    cur_.skip_ws();
    if (cur_.peek() == '(') {
      if (id == "pow") {
        cur_.advance();
        Expr b = sum();
        cur_.expect(',', "between pow arguments");
        Expr e = sum();
        cur_.expect(')', "to close pow");
        return Expr::power(b, e);
      }
      if (auto fn = fn_from_name(id)) {
        cur_.advance();
        Expr arg = sum();
        cur_.expect(')', "to close a function argument");
        return Expr::builtin(*fn, arg);
      }
    }
    return named(id);
  }

  Expr named(const std::string& id) {
    if (auto i = sig_.find_continuous(id)) return Expr::indep_continuous(*i);
    if (auto i = sig_.find_discrete(id)) return Expr::indep_discrete(*i);
    if (auto i = sig_.find_parameter(id)) return Expr::param(*i);
    bool dependent = sig_.find_dependent(id).has_value();
    bool arbitrary = sig_.find_arbitrary(id).has_value();
    if (!dependent && !arbitrary)
      fail(ErrorKind::UndeclaredSymbol, "unknown symbol '" + id + "' at line " +
                                            std::to_string(cur_.line));
    std::vector<int> J(sig_.p(), 0), K(sig_.m(), 0);
    cur_.skip_ws();
    if (cur_.peek() == '[') {
      cur_.advance();
      J = index_list();
      cur_.expect('|', "between derivative and shift indices");
      K = index_list();
      cur_.expect(']', "to close a jet index");
      if (static_cast<int>(J.size()) != sig_.p() || static_cast<int>(K.size()) != sig_.m())
        fail(ErrorKind::ArityError,
             "jet index arity mismatch for '" + id + "' at line " + std::to_string(cur_.line));
    }
    if (dependent) return Expr::field(*sig_.find_dependent(id), std::move(J), std::move(K));
    return Expr::arbitrary(*sig_.find_arbitrary(id), std::move(J), std::move(K));
  }

  std::vector<int> index_list() {
    std::vector<int> out;
    out.push_back(static_cast<int>(cur_.integer()));
    while (cur_.consume(',')) out.push_back(static_cast<int>(cur_.integer()));
    return out;
  }

 private:
  Cursor& cur_;
  const Signature& sig_;
};

// Operator letters: D<var>, S, S[K], id; anything else is a coefficient.
class OperatorParser {
 public:
  OperatorParser(Cursor& cur, const Signature& sig) : cur_(cur), sig_(sig) {}

  // Parses a bare operator expression (no application targets).
  LinearDDOperator parse() {
    LinearDDOperator acc = term_operator(nullptr);
    while (true) {
      cur_.skip_ws();
      if (cur_.peek() == '+') {
        cur_.advance();
        acc = op_add(acc, term_operator(nullptr), sig_);
      } else if (cur_.peek() == '-') {
        cur_.advance();
        acc = op_add(acc, term_operator(nullptr).scaled(Expr::integer(-1), sig_), sig_);
      } else {
        return acc;
      }
    }
  }

  // Parses a sum of applied terms op(target); reports each via the callback.
  void parse_applied(const std::function<void(LinearDDOperator, std::string)>& sink) {
    int sign = 1;
    cur_.skip_ws();
    if (cur_.consume('-')) sign = -1;
    while (true) {
      std::string target;
      LinearDDOperator op = term_operator(&target);
      if (sign < 0) op = op.scaled(Expr::integer(-1), sig_);
      sink(std::move(op), target);
      cur_.skip_ws();
      if (cur_.peek() == '+') {
        cur_.advance();
        sign = 1;
      } else if (cur_.peek() == '-') {
        cur_.advance();
        sign = -1;
      } else {
        return;
      }
    }
  }

 private:
  // One '*'-joined product of letters/coefficients; when `target` is given,
  // the term must end with an application '(name)'.
  LinearDDOperator term_operator(std::string* target) {
    LinearDDOperator acc = LinearDDOperator::identity(sig_);
    while (true) {
      acc = op_compose(acc, element(), sig_);
      cur_.skip_ws();
      if (cur_.peek() == '*') {
        cur_.advance();
        continue;
      }
      if (target) {
        cur_.expect('(', "before an application target");
        *target = application_target();
        cur_.expect(')', "to close an application target");
      }
      return acc;
    }
  }

  std::string application_target() {
    cur_.skip_ws();
    std::string id = cur_.name();
    cur_.skip_ws();
    if (cur_.peek() == '[') {
      cur_.advance();
      std::string inner = cur_.name();
      cur_.expect(']', "to close a target index");
      return id + "[" + inner + "]";
    }
    return id;
  }

  LinearDDOperator element() {
    cur_.skip_ws();
    if (cur_.peek() == '(') {
      // Parenthesized coefficient.
      ExprParser ep(cur_, sig_);
      return LinearDDOperator::multiply(ep.atom(), sig_);
    }
    if (std::isdigit(static_cast<unsigned char>(cur_.peek())))
      return LinearDDOperator::multiply(Expr::integer(cur_.integer()), sig_);

    size_t save_pos = cur_.pos;
    int save_line = cur_.line, save_col = cur_.col;
    std::string id = cur_.name();

    if (id == "id") return LinearDDOperator::identity(sig_);
    if (id == "S") {
      std::vector<int> K(sig_.m(), 0);
      cur_.skip_ws();
      if (cur_.peek() == '[') {
        cur_.advance();
        K.clear();
        K.push_back(static_cast<int>(cur_.integer()));
        while (cur_.consume(',')) K.push_back(static_cast<int>(cur_.integer()));
        cur_.expect(']', "to close a shift index");
        if (static_cast<int>(K.size()) != sig_.m())
          fail(ErrorKind::ArityError, "shift index arity mismatch");
      } else if (cur_.peek() == '^') {
        cur_.advance();
        K[0] = static_cast<int>(cur_.integer());
      } else {
        K[0] = 1;
      }
      return LinearDDOperator::shift_by(K, sig_);
    }
    if (id.size() > 1 && id[0] == 'D') {
      std::string var = id.substr(1);
      LinearDDOperator base = LinearDDOperator::zero();
      if (auto i = sig_.find_continuous(var))
        base = LinearDDOperator::d_x(*i, sig_);
      else if (auto i2 = sig_.find_discrete(var))
        base = LinearDDOperator::d_n(*i2, sig_);
      if (!base.terms.empty()) {
        cur_.skip_ws();
        if (cur_.peek() == '^') {
          cur_.advance();
          long e = cur_.integer();
          if (e < 0) cur_.error("negative powers of derivative/difference operators");
          LinearDDOperator acc = LinearDDOperator::identity(sig_);
          for (long k = 0; k < e; ++k) acc = op_compose(acc, base, sig_);
          return acc;
        }
        return base;
      }
    }
    // Not a letter: re-parse as a coefficient expression atom.
    cur_.pos = save_pos;
    cur_.line = save_line;
    cur_.col = save_col;
    ExprParser ep(cur_, sig_);
    return LinearDDOperator::multiply(ep.power(), sig_);
  }

  Cursor& cur_;
  const Signature& sig_;
};

void expect_end(Cursor& cur) {
  cur.skip_ws();
  if (!cur.eof()) cur.error("unexpected trailing input");
}

std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string piece;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == sep && depth == 0) {
      out.push_back(piece);
      piece.clear();
    } else {
      piece.push_back(c);
    }
  }
  if (!piece.empty()) out.push_back(piece);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

Expr parse_expr(const std::string& text, const Signature& sig) {
  Cursor cur(text);
  ExprParser p(cur, sig);
  Expr e = p.parse();
  expect_end(cur);
  return normalize(e, sig);
}

LinearDDOperator parse_operator(const std::string& text, const Signature& sig) {
  Cursor cur(text);
  OperatorParser p(cur, sig);
  LinearDDOperator op = p.parse();
  expect_end(cur);
  return op_normalize(op, sig);
}

namespace {

struct Block {
  std::string keyword;
  std::string label;       // generator/characteristic/claw/... name
  std::string inline_arg;  // text after ':' on the header line
  std::vector<std::string> lines;
  int line_no = 0;
};

bool is_block_keyword(const std::string& word) {
  static const char* kws[] = {"vars",       "ranking",        "period",     "lagrangian",
                              "system",     "generator",      "characteristic",
                              "claw",       "constraints",    "multiplier", "certificate"};
  return std::any_of(std::begin(kws), std::end(kws),
                     [&](const char* k) { return word == k; });
}

std::vector<Block> split_blocks(const std::string& text) {
  std::vector<Block> blocks;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
    std::string t = trim(line);
    if (t.empty()) continue;

    std::string first;
    size_t i = 0;
    while (i < t.size() && (std::isalnum(static_cast<unsigned char>(t[i])) || t[i] == '_'))
      first.push_back(t[i++]);
    bool header = is_block_keyword(first) &&
                  line.find_first_not_of(" \t") == 0;  // headers start at column 0
    if (header) {
      Block b;
      b.keyword = first;
      b.line_no = lineno;
      std::string rest = trim(t.substr(first.size()));
      if (!rest.empty() && rest[0] != ':') {
        size_t colon = rest.find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::SyntaxError, "missing ':' after block header at line " +
                                           std::to_string(lineno));
        b.label = trim(rest.substr(0, colon));
        b.inline_arg = trim(rest.substr(colon + 1));
      } else if (!rest.empty()) {
        b.inline_arg = trim(rest.substr(1));
      }
      blocks.push_back(std::move(b));
    } else {
      if (blocks.empty())
        fail(ErrorKind::SyntaxError, "content before any block at line " + std::to_string(lineno));
      blocks.back().lines.push_back(t);
    }
  }
  return blocks;
}

std::vector<std::string> block_items(const Block& b) {
  std::vector<std::string> items;
  if (!b.inline_arg.empty()) items.push_back(b.inline_arg);
  for (const auto& l : b.lines) items.push_back(l);
  return items;
}

ExprList parse_expr_list(const std::string& text, const Signature& sig) {
  ExprList out;
  for (const auto& piece : split_top_level(text, ','))
    if (!trim(piece).empty()) out.push_back(parse_expr(trim(piece), sig));
  return out;
}

Signature parse_vars(const Block& b) {
  Signature sig;
  for (const auto& line : b.lines) {
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      fail(ErrorKind::SyntaxError, "expected 'key: names' inside vars block: " + line);
    std::string key = trim(line.substr(0, colon));
    std::string val = trim(line.substr(colon + 1));
    auto names = split_top_level(val, ',');
    for (auto& n : names) n = trim(n);
    if (key == "continuous") {
      for (auto& n : names) sig.continuous.push_back(n);
    } else if (key == "discrete") {
      for (auto& n : names) sig.discrete.push_back(n);
    } else if (key == "dependent") {
      for (auto& n : names) sig.dependent.push_back(n);
    } else if (key == "parameters") {
      for (auto& n : names)
        if (!n.empty()) sig.parameters.push_back(n);
    } else if (key == "arbitrary") {
      // name(args) with args drawn from the declared independent variables
      for (auto& n : names) {
        if (n.empty()) continue;
        size_t open = n.find('(');
        ArbitraryFnDecl decl;
        std::vector<std::string> deps;
        if (open == std::string::npos) {
          decl.name = trim(n);
          for (const auto& x : sig.continuous) deps.push_back(x);
          for (const auto& d : sig.discrete) deps.push_back(d);
        } else {
          decl.name = trim(n.substr(0, open));
          size_t close = n.find(')', open);
          if (close == std::string::npos)
            fail(ErrorKind::SyntaxError, "unclosed dependence list in '" + n + "'");
          for (auto& d : split_top_level(n.substr(open + 1, close - open - 1), ','))
            deps.push_back(trim(d));
        }
        decl.dep_x.assign(sig.continuous.size(), false);
        decl.dep_n.assign(sig.discrete.size(), false);
        for (const auto& d : deps) {
          bool found = false;
          for (size_t i = 0; i < sig.continuous.size(); ++i)
            if (sig.continuous[i] == d) {
              decl.dep_x[i] = true;
              found = true;
            }
          for (size_t i = 0; i < sig.discrete.size(); ++i)
            if (sig.discrete[i] == d) {
              decl.dep_n[i] = true;
              found = true;
            }
          if (!found)
            fail(ErrorKind::UndeclaredSymbol,
                 "arbitrary function '" + decl.name + "' depends on unknown '" + d + "'");
        }
        sig.arbitrary.push_back(std::move(decl));
      }
    } else {
      fail(ErrorKind::SyntaxError, "unknown vars entry '" + key + "'");
    }
  }
  if (sig.continuous.empty() || sig.discrete.empty() || sig.dependent.empty())
    fail(ErrorKind::SyntaxError,
         "vars block must declare continuous, discrete and dependent variables");
  return sig;
}

Ranking parse_ranking(const std::string& text) {
  std::string t = trim(text);
  if (t.empty() || t == "default") return Ranking::total_order();
  if (t == "deriv-major") return Ranking::deriv_major();
  if (t == "shift-major") return Ranking::shift_major();
  fail(ErrorKind::SyntaxError, "unknown ranking '" + t + "'");
}

}  // namespace

const Generator* Problem::find_generator(const std::string& name) const {
  for (const auto& [n, g] : generators)
    if (n == name) return &g;
  return nullptr;
}
const Characteristic* Problem::find_characteristic(const std::string& name) const {
  for (const auto& [n, c] : characteristics)
    if (n == name) return &c;
  return nullptr;
}
const ConservationLaw* Problem::find_claw(const std::string& name) const {
  for (const auto& [n, c] : claws)
    if (n == name) return &c;
  return nullptr;
}
const ExprList* Problem::find_multiplier(const std::string& name) const {
  for (const auto& [n, m] : multipliers)
    if (n == name) return &m;
  return nullptr;
}
const RelationCertificate* Problem::find_certificate(const std::string& name) const {
  for (const auto& [n, c] : certificates)
    if (n == name) return &c;
  return nullptr;
}

Lagrangian Problem::lagrangian_or_fail() const {
  if (!lagrangian) fail(ErrorKind::SyntaxError, "problem declares no lagrangian");
  return Lagrangian::make(*lagrangian, sig);
}

SolvedSystem Problem::solve() const {
  std::vector<Expr> eqs = system;
  if (eqs.empty() && lagrangian)
    for (int alpha = 0; alpha < sig.q(); ++alpha)
      eqs.push_back(euler_lagrange(*lagrangian, alpha, sig));
  return solve_for_leading(eqs, ranking, sig);
}

Problem parse_problem(const std::string& text) {
  Problem p;
  auto blocks = split_blocks(text);

  const Block* vars = nullptr;
  for (const auto& b : blocks)
    if (b.keyword == "vars") {
      if (vars) fail(ErrorKind::SyntaxError, "duplicate vars block");
      vars = &b;
    }
  if (!vars) fail(ErrorKind::SyntaxError, "problem file has no vars block");
  p.sig = parse_vars(*vars);
  p.ranking = Ranking::total_order();

  // Ranking and period first: generators need the period regardless of
  // block order in the file.
  for (const auto& b : blocks) {
    if (b.keyword == "ranking") {
      p.ranking = parse_ranking(b.inline_arg);
    } else if (b.keyword == "period") {
      std::vector<int> r;
      for (const auto& piece : split_top_level(b.inline_arg, ','))
        r.push_back(std::stoi(trim(piece)));
      if (static_cast<int>(r.size()) != p.sig.m())
        fail(ErrorKind::ArityError, "period vector length mismatch");
      p.period = r;
    }
  }

  for (const auto& b : blocks) {
    if (b.keyword == "vars" || b.keyword == "ranking" || b.keyword == "period") continue;
    if (b.keyword == "lagrangian") {
      std::string txt = b.inline_arg;
      for (const auto& l : b.lines) txt += " " + l;
      p.lagrangian = parse_expr(txt, p.sig);
    } else if (b.keyword == "system") {
      for (const auto& item : block_items(b)) p.system.push_back(parse_expr(item, p.sig));
    } else if (b.keyword == "generator") {
      ExprList xi(p.sig.p(), Expr::integer(0));
      ExprList phi(p.sig.q(), Expr::integer(0));
      std::optional<Characteristic> evo;
      for (const auto& line : b.lines) {
        size_t colon = line.find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::SyntaxError, "expected 'xi:'/'phi:'/'Q:' in generator block");
        std::string key = trim(line.substr(0, colon));
        std::string val = trim(line.substr(colon + 1));
        if (key == "xi") {
          xi = parse_expr_list(val, p.sig);
          if (static_cast<int>(xi.size()) != p.sig.p())
            fail(ErrorKind::ArityError, "generator xi arity mismatch");
        } else if (key == "phi") {
          phi = parse_expr_list(val, p.sig);
          if (static_cast<int>(phi.size()) != p.sig.q())
            fail(ErrorKind::ArityError, "generator phi arity mismatch");
        } else if (key == "Q") {
          Characteristic q{parse_expr_list(val, p.sig)};
          evo = q;
        } else {
          fail(ErrorKind::SyntaxError, "unknown generator entry '" + key + "'");
        }
      }
      Generator g = evo ? Generator::evolutionary(*evo, p.sig)
                        : Generator::point(xi, phi, p.sig, p.period);
      p.generators.emplace_back(b.label, std::move(g));
    } else if (b.keyword == "characteristic") {
      std::string txt;
      for (const auto& item : block_items(b)) {
        if (!txt.empty()) txt += ",";
        txt += item;
      }
      Characteristic q{parse_expr_list(txt, p.sig)};
      if (static_cast<int>(q.Q.size()) != p.sig.q())
        fail(ErrorKind::ArityError, "characteristic arity mismatch");
      for (auto& e : q.Q) e = normalize(e, p.sig);
      p.characteristics.emplace_back(b.label, std::move(q));
    } else if (b.keyword == "claw") {
      ConservationLaw claw;
      claw.components = DivComponents::zeros(p.sig);
      bool have_density = false;
      for (const auto& line : b.lines) {
        size_t colon = line.find(':');
        if (colon == std::string::npos)
          fail(ErrorKind::SyntaxError, "expected 'F:'/'G:'/'density:' in claw block");
        std::string key = trim(line.substr(0, colon));
        std::string val = trim(line.substr(colon + 1));
        if (key == "F") {
          ExprList fs = parse_expr_list(val, p.sig);
          if (static_cast<int>(fs.size()) != p.sig.p())
            fail(ErrorKind::ArityError, "claw F arity mismatch");
          claw.components.F = fs;
        } else if (key == "G") {
          ExprList gs = parse_expr_list(val, p.sig);
          if (static_cast<int>(gs.size()) != p.sig.m())
            fail(ErrorKind::ArityError, "claw G arity mismatch");
          claw.components.G = gs;
        } else if (key == "density") {
          claw.density = parse_expr(val, p.sig);
          have_density = true;
        } else {
          fail(ErrorKind::SyntaxError, "unknown claw entry '" + key + "'");
        }
      }
      if (!have_density) claw.density = divergence_of(claw, p.sig);
      p.claws.emplace_back(b.label, std::move(claw));
    } else if (b.keyword == "constraints") {
      ConstraintSet cs;
      // Column order: arbitrary functions in signature order that occur in
      // any constraint row.
      std::vector<std::vector<std::pair<int, LinearDDOperator>>> raw_rows;
      std::vector<bool> used(p.sig.num_arbitrary(), false);
      for (const auto& item : block_items(b)) {
        Cursor cur(item);
        OperatorParser op(cur, p.sig);
        std::vector<std::pair<int, LinearDDOperator>> row;
        op.parse_applied([&](LinearDDOperator o, std::string target) {
          auto r = p.sig.find_arbitrary(target);
          if (!r)
            fail(ErrorKind::UndeclaredSymbol,
                 "constraint applies to unknown function '" + target + "'");
          used[*r] = true;
          row.emplace_back(*r, std::move(o));
        });
        expect_end(cur);
        raw_rows.push_back(std::move(row));
      }
      for (int r = 0; r < p.sig.num_arbitrary(); ++r)
        if (used[r]) cs.functions.push_back(r);
      for (const auto& raw : raw_rows) {
        std::vector<LinearDDOperator> row(cs.functions.size(), LinearDDOperator::zero());
        for (const auto& [fi, op] : raw) {
          auto col = std::find(cs.functions.begin(), cs.functions.end(), fi) -
                     cs.functions.begin();
          row[col] = op_add(row[col], op, p.sig);
        }
        cs.ops.push_back(std::move(row));
      }
      cs.validate(p.sig);
      p.constraints = std::move(cs);
    } else if (b.keyword == "multiplier") {
      std::string txt;
      for (const auto& item : block_items(b)) {
        if (!txt.empty()) txt += ",";
        txt += item;
      }
      p.multipliers.emplace_back(b.label, parse_expr_list(txt, p.sig));
    } else if (b.keyword == "certificate") {
      // Targets EL[depvar] / A[index] resolve after the whole file parses.
      RelationCertificate cert;
      std::string txt;
      for (const auto& item : block_items(b)) txt += item + " ";
      Cursor cur(txt);
      OperatorParser op(cur, p.sig);
      // Terms applied to the same target accumulate into one operator.
      std::vector<std::pair<LinearDDOperator, std::string>> applied;
      op.parse_applied([&](LinearDDOperator o, std::string target) {
        for (auto& [existing, label] : applied) {
          if (label == target) {
            existing = op_add(existing, o, p.sig);
            return;
          }
        }
        applied.emplace_back(std::move(o), std::move(target));
      });
      expect_end(cur);
      for (auto& [o, target] : applied) {
        Expr t;
        if (target.rfind("EL[", 0) == 0) {
          std::string dep = target.substr(3, target.size() - 4);
          auto alpha = p.sig.find_dependent(dep);
          if (!alpha)
            fail(ErrorKind::UndeclaredSymbol, "certificate target EL[" + dep + "] unknown");
          if (!p.lagrangian)
            fail(ErrorKind::SyntaxError, "certificate references EL but no lagrangian given");
          t = euler_lagrange(*p.lagrangian, *alpha, p.sig);
        } else if (target.rfind("A[", 0) == 0) {
          int idx = std::stoi(target.substr(2, target.size() - 3));
          if (idx < 1 || idx > static_cast<int>(p.system.size()))
            fail(ErrorKind::UndeclaredSymbol, "certificate target " + target + " out of range");
          t = p.system[idx - 1];
        } else {
          fail(ErrorKind::SyntaxError,
               "certificate target must be EL[var] or A[index], got '" + target + "'");
        }
        cert.ops.push_back(std::move(o));
        cert.targets.push_back(std::move(t));
        cert.target_labels.push_back(target);
      }
      p.certificates.emplace_back(b.label, std::move(cert));
    } else {
      fail(ErrorKind::SyntaxError, "unknown block keyword '" + b.keyword + "'");
    }
  }
  return p;
}

Problem parse_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::SyntaxError, "cannot open problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

namespace {

std::string print_expr_list(const ExprList& es, const Signature& sig) {
  std::string out;
  for (size_t i = 0; i < es.size(); ++i) {
    if (i) out += ", ";
    out += to_string(es[i], sig);
  }
  return out;
}

}  // namespace

std::string print_problem(const Problem& p) {
  std::ostringstream os;
  const Signature& sig = p.sig;
  os << "vars:\n";
  auto join = [](const std::vector<std::string>& names) {
    std::string out;
    for (size_t i = 0; i < names.size(); ++i) {
      if (i) out += ", ";
      out += names[i];
    }
    return out;
  };
  os << "  continuous: " << join(sig.continuous) << "\n";
  os << "  discrete: " << join(sig.discrete) << "\n";
  os << "  dependent: " << join(sig.dependent) << "\n";
  if (!sig.arbitrary.empty()) {
    os << "  arbitrary: ";
    for (size_t i = 0; i < sig.arbitrary.size(); ++i) {
      if (i) os << ", ";
      const auto& d = sig.arbitrary[i];
      os << d.name << "(";
      bool first = true;
      for (int j = 0; j < sig.p(); ++j)
        if (d.dep_x[j]) {
          if (!first) os << ",";
          os << sig.continuous[j];
          first = false;
        }
      for (int j = 0; j < sig.m(); ++j)
        if (d.dep_n[j]) {
          if (!first) os << ",";
          os << sig.discrete[j];
          first = false;
        }
      os << ")";
    }
    os << "\n";
  }
  if (!sig.parameters.empty()) os << "  parameters: " << join(sig.parameters) << "\n";
  os << "ranking: " << p.ranking.name() << "\n";
  if (p.period) {
    os << "period: ";
    for (size_t i = 0; i < p.period->size(); ++i) {
      if (i) os << ", ";
      os << (*p.period)[i];
    }
    os << "\n";
  }
  if (p.lagrangian) os << "lagrangian: " << to_string(*p.lagrangian, sig) << "\n";
  if (!p.system.empty()) {
    os << "system:\n";
    for (const auto& e : p.system) os << "  " << to_string(e, sig) << "\n";
  }
  for (const auto& [name, g] : p.generators) {
    os << "generator " << name << ":\n";
    if (g.mode == Generator::Mode::Point) {
      os << "  xi: " << print_expr_list(g.xi, sig) << "\n";
      os << "  phi: " << print_expr_list(g.phi, sig) << "\n";
    } else {
      os << "  Q: " << print_expr_list(g.evo.Q, sig) << "\n";
    }
  }
  for (const auto& [name, q] : p.characteristics)
    os << "characteristic " << name << ":\n  " << print_expr_list(q.Q, sig) << "\n";
  for (const auto& [name, claw] : p.claws) {
    os << "claw " << name << ":\n";
    os << "  F: " << print_expr_list(claw.components.F, sig) << "\n";
    os << "  G: " << print_expr_list(claw.components.G, sig) << "\n";
    os << "  density: " << to_string(claw.density, sig) << "\n";
  }
  if (p.constraints) {
    os << "constraints:\n";
    for (const auto& row : p.constraints->ops) {
      os << "  ";
      bool first = true;
      for (size_t r = 0; r < row.size(); ++r) {
        if (row[r].terms.empty()) continue;
        const std::string fname =
            sig.arbitrary[p.constraints->function_index(static_cast<int>(r))].name;
        for (const auto& t : row[r].terms) {
          LinearDDOperator single{{t}};
          if (!first) os << " + ";
          os << to_string(single, sig) << "(" << fname << ")";
          first = false;
        }
      }
      os << "\n";
    }
  }
  for (const auto& [name, lam] : p.multipliers)
    os << "multiplier " << name << ":\n  " << print_expr_list(lam, sig) << "\n";
  for (const auto& [name, cert] : p.certificates) {
    os << "certificate " << name << ":\n  ";
    bool first = true;
    for (size_t l = 0; l < cert.ops.size(); ++l) {
      const std::string label =
          l < cert.target_labels.size() ? cert.target_labels[l] : "A[" + std::to_string(l + 1) + "]";
      for (const auto& t : cert.ops[l].terms) {
        LinearDDOperator single{{t}};
        if (!first) os << " + ";
        os << to_string(single, sig) << "(" << label << ")";
        first = false;
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace ddn
