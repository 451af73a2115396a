#include "ddn/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ddn {

std::string Point::describe(const Signature& sig) const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const std::string& name, const std::string& val) {
    if (!first) os << ", ";
    os << name << "=" << val;
    first = false;
  };
  for (size_t i = 0; i < xs.size(); ++i) emit(sig.continuous[i], xs[i].get_str());
  for (size_t i = 0; i < ns.size(); ++i) emit(sig.discrete[i], std::to_string(ns[i]));
  for (size_t i = 0; i < params.size(); ++i) emit(sig.parameters[i], params[i].get_str());
  for (const auto& [jv, val] : jets) emit(to_string(jv, sig), val.get_str());
  return os.str();
}

Real to_real(const NumVal& v, long precision) {
  if (std::holds_alternative<Rat>(v)) return Real(std::get<Rat>(v), precision);
  return std::get<Real>(v);
}

namespace {

bool is_rat(const NumVal& v) { return std::holds_alternative<Rat>(v); }

NumVal num_add(const NumVal& a, const NumVal& b, long prec) {
  if (is_rat(a) && is_rat(b)) return std::get<Rat>(a) + std::get<Rat>(b);
  return to_real(a, prec) + to_real(b, prec);
}

NumVal num_mul(const NumVal& a, const NumVal& b, long prec) {
  if (is_rat(a) && is_rat(b)) return std::get<Rat>(a) * std::get<Rat>(b);
  return to_real(a, prec) * to_real(b, prec);
}

NumVal num_pow(const NumVal& base, const NumVal& expo, long prec) {
  if (is_rat(expo)) {
    const Rat& e = std::get<Rat>(expo);
    if (is_integer(e) && mpz_fits_slong_p(e.get_num().get_mpz_t())) {
      long k = e.get_num().get_si();
      if (is_rat(base)) {
        const Rat& b = std::get<Rat>(base);
        if (b == 0) {
          if (k < 0) fail(ErrorKind::DomainError, "zero raised to a negative power");
          return Rat(k == 0 ? 1 : 0);
        }
        return rat_pow(b, k);
      }
      const Real& b = std::get<Real>(base);
      if (b.is_zero() && k < 0) fail(ErrorKind::DomainError, "zero raised to a negative power");
      return b.pow_si(k);
    }
  }
  Real b = to_real(base, prec);
  Real e = to_real(expo, prec);
  if (b.sign() < 0) fail(ErrorKind::DomainError, "negative base with non-integer exponent");
  if (b.is_zero() && e.sign() <= 0) fail(ErrorKind::DomainError, "zero base with non-positive exponent");
  Real r = b.pow(e);
  if (r.is_nan()) fail(ErrorKind::DomainError, "power out of domain");
  return r;
}

}  // namespace

NumVal evaluate(const Expr& e, const Signature& sig, const Point& pt, long precision) {
  if (!pt.atoms.empty() && (e.kind() == Kind::Builtin || e.kind() == Kind::Power)) {
    auto it = pt.atoms.find(e);
    if (it != pt.atoms.end()) return it->second;
  }
  switch (e.kind()) {
    case Kind::Integer:
    case Kind::Rational:
      return e.value();
    case Kind::IndepContinuous:
      return pt.xs.at(e.var());
    case Kind::IndepDiscrete:
      return Rat(pt.ns.at(e.var()));
    case Kind::Param:
      return pt.params.at(e.var());
    case Kind::Jet: {
      auto it = pt.jets.find(e.jet());
      if (it == pt.jets.end())
        fail(ErrorKind::NonEvaluable, "point does not assign " + to_string(e.jet(), sig));
      return it->second;
    }
    case Kind::Sum: {
      NumVal acc = Rat(0);
      for (const auto& t : e.args()) acc = num_add(acc, evaluate(t, sig, pt, precision), precision);
      return acc;
    }
    case Kind::Product: {
      NumVal acc = Rat(1);
      for (const auto& f : e.args()) acc = num_mul(acc, evaluate(f, sig, pt, precision), precision);
      return acc;
    }
    case Kind::Power:
      return num_pow(evaluate(e.args()[0], sig, pt, precision),
                     evaluate(e.args()[1], sig, pt, precision), precision);
    case Kind::Builtin: {
      NumVal arg = evaluate(e.args()[0], sig, pt, precision);
      switch (e.fn()) {
        case Fn::Alt: {
          if (!is_rat(arg) || !is_integer(std::get<Rat>(arg)))
            fail(ErrorKind::DomainError, "alt of a non-integer value");
          return Rat(mpz_odd_p(std::get<Rat>(arg).get_num().get_mpz_t()) ? -1 : 1);
        }
        case Fn::Floor:
          if (is_rat(arg)) return Rat(rat_floor(std::get<Rat>(arg)));
          return std::get<Real>(arg).floor();
        case Fn::Ln: {
          Real x = to_real(arg, precision);
          if (x.sign() <= 0) fail(ErrorKind::DomainError, "ln of a non-positive value");
          return x.ln();
        }
        case Fn::Exp:
          return to_real(arg, precision).exp();
        case Fn::Sin:
          return to_real(arg, precision).sin();
        case Fn::Cos:
          return to_real(arg, precision).cos();
      }
      fail(ErrorKind::Internal, "unhandled builtin");
    }
  }
  fail(ErrorKind::Internal, "unhandled node kind in evaluate");
}

const char* to_string(ZeroVerdict v) {
  switch (v) {
    case ZeroVerdict::Yes: return "yes";
    case ZeroVerdict::ProbablyYes: return "probably-yes";
    case ZeroVerdict::No: return "no";
  }
  return "?";
}

namespace {

// Deterministic across platforms: mt19937_64 output reduced by modulo.
class Sampler {
 public:
  Sampler(std::uint64_t seed, long magnitude) : eng_(seed), magnitude_(magnitude) {}

  Rat rational() {
    long num = 1 + static_cast<long>(eng_() % static_cast<std::uint64_t>(magnitude_));
    long den = 1 + static_cast<long>(eng_() % static_cast<std::uint64_t>(magnitude_));
    bool negative = (eng_() & 1) != 0;
    Rat q(negative ? -num : num, den);
    q.canonicalize();
    return q;
  }

  long integer_in(long lo, long hi) {
    return lo + static_cast<long>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
  long magnitude_;
};

Point draw_point(Sampler& s, const Signature& sig, const std::vector<JetVar>& jets, int window) {
  Point pt;
  pt.xs.resize(sig.p());
  for (auto& x : pt.xs) x = s.rational();
  pt.params.resize(sig.parameters.size());
  for (auto& p : pt.params) p = s.rational();
  pt.ns.resize(sig.m());
  for (auto& n : pt.ns) n = s.integer_in(-window, window);
  for (const auto& jv : jets) pt.jets.emplace(jv, s.rational());
  return pt;
}

// Degree bound for the Schwartz-Zippel style confidence estimate.
int degree_estimate(const Expr& normalized) {
  int deg = 1;
  walk(normalized, [&](const Expr& n) {
    if (n.kind() == Kind::Power && n.args()[1].kind() == Kind::Integer) {
      long e = std::labs(n.args()[1].value().get_num().get_si());
      deg = std::max(deg, static_cast<int>(std::min<long>(e, 64)));
    }
  });
  return deg * 4;
}

}  // namespace

ZeroResult is_zero(const Expr& e, const Signature& sig, const SampleConfig& cfg) {
  Expr n = normalize(e, sig);
  if (is_syntactic_zero(n)) return {ZeroVerdict::Yes, 1.0, std::nullopt, "canonical zero"};

  const bool exact_atoms = !contains_transcendental(n) && !contains_floor_alt(n);
  const std::vector<JetVar> jets = collect_jet_vars(n);
  const Real tolerance(Rat(cfg.tolerance), cfg.precision);

  Sampler sampler(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x123456789ULL, cfg.magnitude);

  int evaluated_points = 0;
  for (int k = 0; k < cfg.samples; ++k) {
    bool sample_done = false;
    for (int attempt = 0; attempt < cfg.retries && !sample_done; ++attempt) {
      Point pt = draw_point(sampler, sig, jets, cfg.window);
      // Sweep the first two discrete directions over the window; further
      // directions keep the drawn value.
      std::vector<Point> grid;
      for (long n0 = -cfg.window; n0 <= cfg.window; ++n0) {
        Point g = pt;
        if (sig.m() >= 1) g.ns[0] = n0;
        if (sig.m() >= 2) {
          for (long n1 = -cfg.window; n1 <= cfg.window; ++n1) {
            g.ns[1] = n1;
            grid.push_back(g);
          }
        } else {
          grid.push_back(g);
          if (sig.m() == 0) break;
        }
      }

      int grid_hits = 0;
      for (const auto& g : grid) {
        NumVal val;
        try {
          val = evaluate(n, sig, g, cfg.precision);
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::DomainError) continue;  // singular grid point
          throw;
        }
        ++grid_hits;
        if (std::holds_alternative<Rat>(val)) {
          if (std::get<Rat>(val) != 0)
            return {ZeroVerdict::No, 1.0, g, "nonzero at sampled point (exact)"};
        } else {
          Real v = std::get<Real>(val).abs();
          // Relative scale: sum of term magnitudes of the top-level sum.
          Real scale(Rat(1), cfg.precision);
          if (n.kind() == Kind::Sum) {
            Real acc(Rat(0), cfg.precision);
            bool scale_ok = true;
            for (const auto& t : n.args()) {
              try {
                acc = acc + to_real(evaluate(t, sig, g, cfg.precision), cfg.precision).abs();
              } catch (const Error&) {
                scale_ok = false;
                break;
              }
            }
            if (scale_ok && scale < acc) scale = acc;
          }
          if (scale * tolerance < v)
            return {ZeroVerdict::No, 1.0, g, "residual above tolerance at sampled point"};
        }
      }
      if (grid_hits > 0) {
        evaluated_points += grid_hits;
        sample_done = true;
      }
    }
    if (!sample_done)
      fail(ErrorKind::NonEvaluable, "builtin out of domain at every resampling attempt");
  }

  if (evaluated_points == 0)
    fail(ErrorKind::SingularSample, "every sampled point was singular");

  if (exact_atoms) {
    // Nonzero canonical form over free coordinates: the function is not
    // identically zero even though sampling failed to exhibit a witness.
    return {ZeroVerdict::No, 1.0, std::nullopt,
            "nonzero canonical form over free coordinates"};
  }

  double d = static_cast<double>(degree_estimate(n));
  double per_sample = std::min(1.0, d / static_cast<double>(cfg.magnitude));
  double confidence = 1.0 - std::pow(per_sample, std::max(1, evaluated_points / 4));
  return {ZeroVerdict::ProbablyYes, confidence, std::nullopt,
          "vanished at all " + std::to_string(evaluated_points) + " sampled points"};
}

}  // namespace ddn
