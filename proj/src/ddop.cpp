#include "ddn/ddop.hpp"

#include <algorithm>
#include <sstream>

namespace ddn {

LinearDDOperator LinearDDOperator::identity(const Signature& sig) {
  return {{OpTerm{Expr::integer(1), std::vector<int>(sig.p(), 0), std::vector<int>(sig.m(), 0)}}};
}

LinearDDOperator LinearDDOperator::d_x(int direction, const Signature& sig) {
  std::vector<int> J(sig.p(), 0);
  J.at(direction) = 1;
  return {{OpTerm{Expr::integer(1), J, std::vector<int>(sig.m(), 0)}}};
}

LinearDDOperator LinearDDOperator::shift_by(const std::vector<int>& K, const Signature& sig) {
  if (static_cast<int>(K.size()) != sig.m())
    fail(ErrorKind::ArityError, "shift multi-index length mismatch");
  return {{OpTerm{Expr::integer(1), std::vector<int>(sig.p(), 0), K}}};
}

LinearDDOperator LinearDDOperator::d_n(int direction, const Signature& sig) {
  std::vector<int> K(sig.m(), 0);
  K.at(direction) = 1;
  LinearDDOperator op = shift_by(K, sig);
  op.terms.push_back(
      OpTerm{Expr::integer(-1), std::vector<int>(sig.p(), 0), std::vector<int>(sig.m(), 0)});
  return op;
}

LinearDDOperator LinearDDOperator::multiply(Expr f, const Signature& sig) {
  return {{OpTerm{std::move(f), std::vector<int>(sig.p(), 0), std::vector<int>(sig.m(), 0)}}};
}

LinearDDOperator LinearDDOperator::scaled(const Expr& c, const Signature& sig) const {
  LinearDDOperator out;
  for (const auto& t : terms)
    out.terms.push_back(OpTerm{normalize(c * t.coeff, sig), t.derivs, t.shifts});
  return out;
}

namespace {

int cmp_vec(const std::vector<int>& a, const std::vector<int>& b) {
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

bool term_less(const OpTerm& a, const OpTerm& b) {
  if (int c = cmp_vec(a.derivs, b.derivs)) return c < 0;
  return cmp_vec(a.shifts, b.shifts) < 0;
}

}  // namespace

LinearDDOperator op_normalize(const LinearDDOperator& op, const Signature& sig) {
  std::vector<OpTerm> merged;
  for (const auto& t : op.terms) {
    if (static_cast<int>(t.derivs.size()) != sig.p() ||
        static_cast<int>(t.shifts.size()) != sig.m())
      fail(ErrorKind::ArityError, "operator multi-index length mismatch");
    auto it = std::find_if(merged.begin(), merged.end(), [&](const OpTerm& m) {
      return m.derivs == t.derivs && m.shifts == t.shifts;
    });
    if (it == merged.end())
      merged.push_back(t);
    else
      it->coeff = it->coeff + t.coeff;
  }
  LinearDDOperator out;
  for (auto& t : merged) {
    t.coeff = normalize(t.coeff, sig);
    if (!t.coeff.is_zero_number()) out.terms.push_back(std::move(t));
  }
  std::sort(out.terms.begin(), out.terms.end(), term_less);
  return out;
}

Expr op_apply(const LinearDDOperator& op, const Expr& e, const Signature& sig) {
  ExprList terms;
  for (const auto& t : op.terms) {
    Expr v = apply_derivatives(shift(e, t.shifts, sig), t.derivs, sig);
    terms.push_back(t.coeff * v);
  }
  return normalize(Expr::sum(std::move(terms)), sig);
}

LinearDDOperator op_add(const LinearDDOperator& a, const LinearDDOperator& b,
                        const Signature& sig) {
  LinearDDOperator out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return op_normalize(out, sig);
}

namespace {

// All multi-indices I with 0 <= I <= J componentwise.
void enumerate_sub_indices(const std::vector<int>& J,
                           const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> I(J.size(), 0);
  while (true) {
    f(I);
    size_t i = 0;
    while (i < J.size()) {
      if (I[i] < J[i]) {
        ++I[i];
        break;
      }
      I[i] = 0;
      ++i;
    }
    if (i == J.size()) return;
  }
}

Rat multinomial(const std::vector<int>& J, const std::vector<int>& I) {
  Rat c(1);
  for (size_t i = 0; i < J.size(); ++i) c *= Rat(binomial(J[i], I[i]));
  return c;
}

}  // namespace

LinearDDOperator op_compose(const LinearDDOperator& a, const LinearDDOperator& b,
                            const Signature& sig) {
  LinearDDOperator out;
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      // D_J S_K (g h) = sum_{I<=J} C(J,I) D_I(S_K g) D_{J-I} S_K h
      Expr g_shifted = shift(tb.coeff, ta.shifts, sig);
      enumerate_sub_indices(ta.derivs, [&](const std::vector<int>& I) {
        Expr gI = apply_derivatives(g_shifted, I, sig);
        std::vector<int> Jrem(ta.derivs.size());
        for (size_t i = 0; i < Jrem.size(); ++i) Jrem[i] = ta.derivs[i] - I[i] + tb.derivs[i];
        std::vector<int> Ksum(ta.shifts.size());
        for (size_t i = 0; i < Ksum.size(); ++i) Ksum[i] = ta.shifts[i] + tb.shifts[i];
        Expr coeff = ta.coeff * Expr::number(multinomial(ta.derivs, I)) * gI;
        out.terms.push_back(OpTerm{coeff, Jrem, Ksum});
      });
    }
  }
  return op_normalize(out, sig);
}

LinearDDOperator op_adjoint(const LinearDDOperator& op, const Signature& sig) {
  LinearDDOperator out;
  for (const auto& t : op.terms) {
    // (f D_J S_K)^t = (-1)^|J| D_J S_{-K} (f .)
    int degree = 0;
    for (int j : t.derivs) degree += j;
    std::vector<int> negK(t.shifts.size());
    for (size_t i = 0; i < negK.size(); ++i) negK[i] = -t.shifts[i];
    LinearDDOperator word{{OpTerm{Expr::integer(degree % 2 == 0 ? 1 : -1), t.derivs, negK}}};
    LinearDDOperator piece =
        op_compose(word, LinearDDOperator::multiply(t.coeff, sig), sig);
    out.terms.insert(out.terms.end(), piece.terms.begin(), piece.terms.end());
  }
  return op_normalize(out, sig);
}

bool op_equal(const LinearDDOperator& a, const LinearDDOperator& b, const Signature& sig) {
  LinearDDOperator na = op_normalize(a, sig);
  LinearDDOperator nb = op_normalize(b, sig);
  if (na.terms.size() != nb.terms.size()) return false;
  for (size_t i = 0; i < na.terms.size(); ++i) {
    if (na.terms[i].derivs != nb.terms[i].derivs || na.terms[i].shifts != nb.terms[i].shifts)
      return false;
    if (!normalize(na.terms[i].coeff - nb.terms[i].coeff, sig).is_zero_number()) return false;
  }
  return true;
}

std::string to_string(const LinearDDOperator& op, const Signature& sig) {
  if (op.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : op.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_string(t.coeff, sig) << ")";
    for (int i = 0; i < sig.p(); ++i)
      for (int k = 0; k < t.derivs[i]; ++k) os << "*D" << sig.continuous[i];
    bool shifted = false;
    for (int i = 0; i < sig.m(); ++i) shifted = shifted || t.shifts[i] != 0;
    if (shifted) {
      os << "*S[";
      for (int i = 0; i < sig.m(); ++i) {
        if (i) os << ',';
        os << t.shifts[i];
      }
      os << "]";
    }
  }
  return os.str();
}

DivComponents DivComponents::zeros(const Signature& sig) {
  DivComponents c;
  c.F.assign(sig.p(), Expr::integer(0));
  c.G.assign(sig.m(), Expr::integer(0));
  return c;
}

DivComponents div_add(const DivComponents& a, const DivComponents& b, const Signature& sig) {
  DivComponents out = DivComponents::zeros(sig);
  for (int i = 0; i < sig.p(); ++i) out.F[i] = normalize(a.F[i] + b.F[i], sig);
  for (int i = 0; i < sig.m(); ++i) out.G[i] = normalize(a.G[i] + b.G[i], sig);
  return out;
}

DivComponents div_negate(const DivComponents& a, const Signature& sig) {
  DivComponents out = DivComponents::zeros(sig);
  for (int i = 0; i < sig.p(); ++i) out.F[i] = normalize(-a.F[i], sig);
  for (int i = 0; i < sig.m(); ++i) out.G[i] = normalize(-a.G[i], sig);
  return out;
}

namespace {

// Letters of the operator word D_J S_K, applied outermost first.
struct Letter {
  enum class Type { D, S, Sinv } type;
  int direction;
};

void peel(const Expr& f, const std::vector<Letter>& word, size_t pos, const Expr& g,
          const Signature& sig, DivComponents& acc) {
  if (pos == word.size()) return;
  const Letter& w = word[pos];
  // h = (rest of word)(g)
  Expr h = g;
  for (size_t i = word.size(); i-- > pos + 1;) {
    const Letter& l = word[i];
    switch (l.type) {
      case Letter::Type::D: h = total_derivative(h, l.direction, sig); break;
      case Letter::Type::S: h = shift1(h, l.direction, 1, sig); break;
      case Letter::Type::Sinv: h = shift1(h, l.direction, -1, sig); break;
    }
  }
  switch (w.type) {
    case Letter::Type::D: {
      acc.F[w.direction] = normalize(acc.F[w.direction] + f * h, sig);
      peel(normalize(-total_derivative(f, w.direction, sig), sig), word, pos + 1, g, sig, acc);
      break;
    }
    case Letter::Type::S: {
      Expr fprev = shift1(f, w.direction, -1, sig);
      acc.G[w.direction] = normalize(acc.G[w.direction] + fprev * h, sig);
      peel(fprev, word, pos + 1, g, sig, acc);
      break;
    }
    case Letter::Type::Sinv: {
      Expr hm = shift1(h, w.direction, -1, sig);
      acc.G[w.direction] = normalize(acc.G[w.direction] - f * hm, sig);
      peel(shift1(f, w.direction, 1, sig), word, pos + 1, g, sig, acc);
      break;
    }
  }
}

}  // namespace

DivComponents adjoint_defect(const LinearDDOperator& op, const Expr& f, const Expr& g,
                             const Signature& sig) {
  DivComponents acc = DivComponents::zeros(sig);
  for (const auto& t : op.terms) {
    std::vector<Letter> word;
    for (int i = 0; i < sig.p(); ++i)
      for (int k = 0; k < t.derivs[i]; ++k) word.push_back({Letter::Type::D, i});
    for (int i = 0; i < sig.m(); ++i) {
      for (int k = 0; k < t.shifts[i]; ++k) word.push_back({Letter::Type::S, i});
      for (int k = 0; k < -t.shifts[i]; ++k) word.push_back({Letter::Type::Sinv, i});
    }
    peel(normalize(f * t.coeff, sig), word, 0, g, sig, acc);
  }
  return acc;
}

Expr divergence_expr(const DivComponents& c, const Signature& sig) {
  ExprList terms;
  for (int i = 0; i < sig.p() && i < static_cast<int>(c.F.size()); ++i)
    terms.push_back(total_derivative(c.F[i], i, sig));
  for (int i = 0; i < sig.m() && i < static_cast<int>(c.G.size()); ++i)
    terms.push_back(forward_difference(c.G[i], i, sig));
  return normalize(Expr::sum(std::move(terms)), sig);
}

}  // namespace ddn
