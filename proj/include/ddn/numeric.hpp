#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <cstdint>
#include <string>
#include <utility>

namespace ddn {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// Largest integer <= a/b, exact.
inline Int rat_floor(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

inline Rat rat_pow(const Rat& base, long e) {
  Rat r;
  if (e >= 0) {
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
  } else {
    mpz_pow_ui(r.get_num_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(-e));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(-e));
  }
  r.canonicalize();
  return r;
}

inline Int binomial(long n, long k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

// Arbitrary-precision binary float over MPFR; value-semantic RAII wrapper.
// Precision is fixed per object at construction.
class Real {
 public:
  explicit Real(mpfr_prec_t prec = 128) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  Real(const Rat& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  Real(long n, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, n, MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  Real& operator=(Real o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  static Real binary(const Real& a, const Real& b,
                     int (*op)(mpfr_t, const mpfr_t, const mpfr_t, mpfr_rnd_t)) {
    Real r(std::max(a.prec(), b.prec()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

  Real neg() const { Real r(prec()); mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
  Real abs() const { Real r(prec()); mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  Real ln() const { Real r(prec()); mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
  Real exp() const { Real r(prec()); mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
  Real sin() const { Real r(prec()); mpfr_sin(r.v_, v_, MPFR_RNDN); return r; }
  Real cos() const { Real r(prec()); mpfr_cos(r.v_, v_, MPFR_RNDN); return r; }
  Real floor() const { Real r(prec()); mpfr_floor(r.v_, v_); return r; }
  Real pow(const Real& e) const {
    Real r(std::max(prec(), e.prec()));
    mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN);
    return r;
  }
  Real pow_si(long e) const { Real r(prec()); mpfr_pow_si(r.v_, v_, e, MPFR_RNDN); return r; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  std::string str(int digits = 30) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

 private:
  mpfr_t v_;
};

}  // namespace ddn
