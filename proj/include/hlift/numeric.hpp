#pragma once

// Multiprecision reals and complex numbers. Every value carries its own
// precision; binary operations work at the larger of the two.

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hlift/arith.hpp"

namespace hlift {

class Real {
 public:
  explicit Real(mpfr_prec_t prec = 64) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Real(double x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Real(long x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Int& x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
  }
  Real(const Rat& x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  Real rounded(mpfr_prec_t p) const {
    Real r(p);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  static Real pi(mpfr_prec_t prec) {
    Real r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { return apply(o, mpfr_add); }
  Real& operator-=(const Real& o) { return apply(o, mpfr_sub); }
  Real& operator*=(const Real& o) { return apply(o, mpfr_mul); }
  Real& operator/=(const Real& o) { return apply(o, mpfr_div); }

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }
  Real operator-() const {
    Real r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }

  bool is_zero() const { return mpfr_zero_p(v_); }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; very negative for zero.
  long exponent2() const {
    if (mpfr_zero_p(v_)) return -(1L << 40);
    return mpfr_get_exp(v_);
  }

  Int round() const {
    Int z;
    mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
    return z;
  }

  std::string str(int digits = 20) const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", digits, v_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

#define HLIFT_REAL_UNARY(name, fn)          \
  friend Real name(const Real& a) {         \
    Real r(a.prec());                       \
    fn(r.v_, a.v_, MPFR_RNDN);              \
    return r;                               \
  }
  HLIFT_REAL_UNARY(exp, mpfr_exp)
  HLIFT_REAL_UNARY(log, mpfr_log)
  HLIFT_REAL_UNARY(sin, mpfr_sin)
  HLIFT_REAL_UNARY(cos, mpfr_cos)
  HLIFT_REAL_UNARY(sqrt, mpfr_sqrt)
  HLIFT_REAL_UNARY(abs, mpfr_abs)
#undef HLIFT_REAL_UNARY

  /// sin and cos of 2*pi*r for a rational r, exact in the reduction step.
  static std::pair<Real, Real> cos_sin_2pi(const Rat& r, mpfr_prec_t prec) {
    Rat f = r - Rat(Int(floor_rat(r)));
    Real ang = Real::pi(prec + 8) * Real(Rat(2 * f), prec + 8);
    Real c(prec), s(prec);
    mpfr_sin_cos(s.v_, c.v_, ang.v_, MPFR_RNDN);
    return {c, s};
  }

 private:
  static Int floor_rat(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
  }
  Real& apply(const Real& o, int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)) {
    if (o.prec() > prec()) mpfr_prec_round(v_, o.prec(), MPFR_RNDN);
    fn(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  mpfr_t v_;
};

struct Complex {
  Real re, im;

  explicit Complex(mpfr_prec_t prec = 64) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return Complex(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  friend Complex operator*(const Complex& a, const Real& s) { return Complex(a.re * s, a.im * s); }
  friend Complex operator/(const Complex& a, const Complex& b) {
    Real n = b.re * b.re + b.im * b.im;
    return Complex((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
  }
  Complex operator-() const { return Complex(-re, -im); }

  Real norm() const { return re * re + im * im; }
  Real abs() const { return sqrt(norm()); }
};

/// e^{2 pi i z}
inline Complex exp_2pi_i(const Complex& z) {
  mpfr_prec_t p = z.prec();
  Real two_pi = Real::pi(p + 8) * Real(2L, p + 8);
  Real mod = exp(-(two_pi * z.im));
  Real ang = two_pi * z.re;
  return Complex(mod * cos(ang), mod * sin(ang));
}

}  // namespace hlift
