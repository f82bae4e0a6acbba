#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_m), dense power basis modulo
// the m-th cyclotomic polynomial.

#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <vector>

#include "hlift/arith.hpp"
#include "hlift/numeric.hpp"

namespace hlift {

using IntPoly = std::vector<long>;  // ascending coefficients

/// Phi_m, cached.
inline const IntPoly& cyclotomic_polynomial(long m) {
  if (m < 1) throw DomainError("cyclotomic_polynomial: m must be positive");
  static std::mutex mu;
  static std::map<long, IntPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
  }
  // x^m - 1 divided by Phi_d for proper divisors d
  std::vector<long> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (long d : divisors(m)) {
    if (d == m) continue;
    const IntPoly& den = cyclotomic_polynomial(d);
    long dn = static_cast<long>(den.size()) - 1;
    long nn = static_cast<long>(num.size()) - 1;
    std::vector<long> q(nn - dn + 1, 0);
    for (long i = nn; i >= dn; --i) {
      long c = num[i];
      q[i - dn] = c;
      if (c == 0) continue;
      for (long j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    num = q;
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(m, num).first->second;
}

class CyclotomicNumber {
 public:
  CyclotomicNumber() : m_(1), num_(1, Int(0)), den_(1) {}
  CyclotomicNumber(long x) : m_(1), num_(1, Int(x)), den_(1) {}  // NOLINT
  CyclotomicNumber(const Int& x) : m_(1), num_(1, x), den_(1) {}  // NOLINT
  CyclotomicNumber(const Rat& x) : m_(1), num_(1, x.get_num()), den_(x.get_den()) {}  // NOLINT

  /// Build from numerators over a common denominator; entries beyond phi(m)
  /// are reduced modulo Phi_m.
  CyclotomicNumber(long m, std::vector<Int> num, Int den = 1) : m_(m), num_(std::move(num)), den_(std::move(den)) {
    if (m_ < 1) throw DomainError("cyclotomic order must be positive");
    if (den_ == 0) throw DomainError("zero denominator");
    reduce_poly(num_, m_);
    canonicalize();
  }

  static CyclotomicNumber root_of_unity(long m, long b) {
    if (m < 1) throw DomainError("root_of_unity: m must be positive");
    long e = mod(b, m);
    std::vector<Int> v(e + 1, Int(0));
    v[e] = 1;
    return CyclotomicNumber(m, std::move(v));
  }

  long order() const { return m_; }
  const std::vector<Int>& numerators() const { return num_; }
  const Int& denominator() const { return den_; }

  std::vector<Rat> coords() const {
    std::vector<Rat> out;
    out.reserve(num_.size());
    for (const Int& c : num_) {
      Rat r(c, den_);
      r.canonicalize();
      out.push_back(r);
    }
    return out;
  }

  bool is_zero() const { return m_ == 1 && num_[0] == 0; }
  bool is_one() const { return m_ == 1 && num_[0] == den_; }

  std::optional<Rat> to_rational() const {
    if (m_ != 1) return std::nullopt;
    Rat r(num_[0], den_);
    r.canonicalize();
    return r;
  }

  /// The same element written in Q(zeta_M); M must be a multiple of the order.
  CyclotomicNumber lift(long M) const {
    if (M % m_ != 0) throw DomainError("lift: target order is not a multiple");
    if (M == m_ || m_ == 1) {
      CyclotomicNumber r(*this);
      r.m_ = m_ == 1 ? 1 : M;
      return r;
    }
    long step = M / m_;
    std::vector<Int> v((num_.size() - 1) * step + 1, Int(0));
    for (std::size_t i = 0; i < num_.size(); ++i) v[i * step] = num_[i];
    CyclotomicNumber r;
    r.m_ = M;
    r.num_ = std::move(v);
    r.den_ = den_;
    reduce_poly(r.num_, M);
    return r;
  }

  /// Galois automorphism zeta -> zeta^a, gcd(a, m) = 1.
  CyclotomicNumber galois(long a) const {
    if (std::gcd(mod(a, m_), m_) != 1 && m_ > 1) throw DomainError("galois: exponent not coprime to order");
    if (m_ == 1) return *this;
    std::vector<Int> v(m_, Int(0));
    for (std::size_t i = 0; i < num_.size(); ++i) v[mod(static_cast<long>(i) * a, m_)] += num_[i];
    return CyclotomicNumber(m_, std::move(v), den_);
  }

  CyclotomicNumber operator-() const {
    CyclotomicNumber r(*this);
    for (Int& c : r.num_) c = -c;
    return r;
  }

  friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return add_sub(a, b, false);
  }
  friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return add_sub(a, b, true);
  }
  friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.m_ == 1 && b.m_ == 1) {
      CyclotomicNumber r;
      r.num_[0] = a.num_[0] * b.num_[0];
      r.den_ = a.den_ * b.den_;
      r.canonicalize();
      return r;
    }
    if (a.m_ == 1 || b.m_ == 1) {
      const CyclotomicNumber& s = a.m_ == 1 ? a : b;
      const CyclotomicNumber& v = a.m_ == 1 ? b : a;
      CyclotomicNumber r(v);
      for (Int& c : r.num_) c *= s.num_[0];
      r.den_ *= s.den_;
      r.canonicalize();
      return r;
    }
    long M = std::lcm(a.m_, b.m_);
    const CyclotomicNumber& x = a.m_ == M ? a : a.lift(M);
    const CyclotomicNumber& y = b.m_ == M ? b : b.lift(M);
    std::vector<Int> v(x.num_.size() + y.num_.size() - 1, Int(0));
    for (std::size_t i = 0; i < x.num_.size(); ++i) {
      if (x.num_[i] == 0) continue;
      for (std::size_t j = 0; j < y.num_.size(); ++j) {
        if (y.num_[j] == 0) continue;
        mpz_addmul(v[i + j].get_mpz_t(), x.num_[i].get_mpz_t(), y.num_[j].get_mpz_t());
      }
    }
    return CyclotomicNumber(M, std::move(v), x.den_ * y.den_);
  }

  CyclotomicNumber& operator+=(const CyclotomicNumber& o) { return *this = *this + o; }
  CyclotomicNumber& operator-=(const CyclotomicNumber& o) { return *this = *this - o; }
  CyclotomicNumber& operator*=(const CyclotomicNumber& o) { return *this = *this * o; }

  /// Multiplicative inverse via the extended Euclidean algorithm over Q[x].
  CyclotomicNumber inv() const {
    if (is_zero()) throw DomainError("division by zero in cyclotomic field");
    if (m_ == 1) return CyclotomicNumber(Rat(den_, num_[0]));
    using RP = std::vector<Rat>;
    const IntPoly& phi = cyclotomic_polynomial(m_);
    RP r0(phi.begin(), phi.end()), r1;
    for (const Int& c : num_) r1.emplace_back(c);
    trim(r1);
    RP s0{Rat(0)}, s1{Rat(1)};  // coefficients of the element
    while (!(r1.size() == 1)) {
      auto [q, r] = divmod(r0, r1);
      RP s2 = sub(s0, mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      if (r1.empty()) throw DomainError("inverse: element not invertible");
    }
    // r1 is a nonzero constant: num * s1 = r1 mod Phi
    Rat c = r1[0];
    std::vector<Int> v;
    Int l = 1;
    for (const Rat& x : s1) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (const Rat& x : s1) v.push_back(x.get_num() * (l / x.get_den()));
    // element^{-1} = s1 * den / c
    Rat scale = Rat(den_) / (c * Rat(l));
    scale.canonicalize();
    for (Int& x : v) x *= scale.get_num();
    return CyclotomicNumber(m_, std::move(v), scale.get_den());
  }

  friend CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b) { return a * b.inv(); }

  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    if (a.m_ == b.m_) return a.den_ == b.den_ && a.num_ == b.num_;
    return (a - b).is_zero();
  }
  friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

  /// Complex value under zeta_m -> e^{2 pi i/m}.
  Complex embed(mpfr_prec_t prec) const {
    if (prec < 32) throw DomainError("embed: precision below 32 bits");
    mpfr_prec_t wp = prec + 16;
    Complex acc(wp);
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      Real c(num_[i], wp);
      if (i == 0) {
        acc.re += c;
        continue;
      }
      auto [co, si] = Real::cos_sin_2pi(Rat(static_cast<long>(i), m_), wp);
      acc.re += c * co;
      acc.im += c * si;
    }
    Real d(den_, wp);
    acc.re /= d;
    acc.im /= d;
    return acc;
  }

  std::string str() const {
    if (m_ == 1) return to_string(Rat(num_[0], den_));
    std::string s;
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (num_[i] == 0) continue;
      Rat c(num_[i], den_);
      c.canonicalize();
      if (!s.empty()) s += " + ";
      s += "(" + to_string(c) + ")";
      if (i > 0) s += "*z" + std::to_string(m_) + "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

  friend std::ostream& operator<<(std::ostream& os, const CyclotomicNumber& a) { return os << a.str(); }

 private:
  static void reduce_poly(std::vector<Int>& v, long m) {
    const IntPoly& phi = cyclotomic_polynomial(m);
    long deg = static_cast<long>(phi.size()) - 1;
    for (long i = static_cast<long>(v.size()) - 1; i >= deg; --i) {
      if (v[i] == 0) continue;
      Int c = v[i];
      for (long j = 0; j < deg; ++j)
        if (phi[j] != 0) v[i - deg + j] -= c * phi[j];
      v[i] = 0;
    }
    v.resize(deg, Int(0));
  }

  void canonicalize() {
    if (den_ < 0) {
      den_ = -den_;
      for (Int& c : num_) c = -c;
    }
    Int g = den_;
    for (const Int& c : num_) {
      if (g == 1) break;
      if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    if (g != 1) {
      for (Int& c : num_)
        if (c != 0) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
    bool rational = true;
    for (std::size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) rational = false;
    if (rational) {
      m_ = 1;
      num_.resize(1);
      if (num_[0] == 0) den_ = 1;
    }
  }

  static CyclotomicNumber add_sub(const CyclotomicNumber& a, const CyclotomicNumber& b, bool neg) {
    long M = std::lcm(a.m_, b.m_);
    CyclotomicNumber x = a.m_ == M ? a : a.lift(M);
    CyclotomicNumber y = b.m_ == M ? b : b.lift(M);
    if (M > 1) {
      std::size_t n = static_cast<std::size_t>(euler_phi(M));
      x.num_.resize(n, Int(0));
      y.num_.resize(n, Int(0));
    }
    std::vector<Int> v(x.num_.size());
    if (x.den_ == y.den_) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = neg ? Int(x.num_[i] - y.num_[i]) : Int(x.num_[i] + y.num_[i]);
      CyclotomicNumber r;
      r.m_ = M;
      r.num_ = std::move(v);
      r.den_ = x.den_;
      r.canonicalize();
      return r;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = x.num_[i] * y.den_;
      if (neg)
        mpz_submul(v[i].get_mpz_t(), y.num_[i].get_mpz_t(), x.den_.get_mpz_t());
      else
        mpz_addmul(v[i].get_mpz_t(), y.num_[i].get_mpz_t(), x.den_.get_mpz_t());
    }
    CyclotomicNumber r;
    r.m_ = M;
    r.num_ = std::move(v);
    r.den_ = x.den_ * y.den_;
    r.canonicalize();
    return r;
  }

  using RP = std::vector<Rat>;
  static void trim(RP& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  }
  static RP sub(const RP& a, const RP& b) {
    RP r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    if (r.empty()) r.push_back(0);
    return r;
  }
  static RP mul(const RP& a, const RP& b) {
    RP r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    if (r.empty()) r.push_back(0);
    return r;
  }
  static std::pair<RP, RP> divmod(RP a, const RP& b) {
    trim(a);
    if (a.size() < b.size()) return {RP{Rat(0)}, a};
    RP q(a.size() - b.size() + 1, Rat(0));
    for (long i = static_cast<long>(a.size()) - 1; i >= static_cast<long>(b.size()) - 1; --i) {
      Rat c = a[i] / b.back();
      q[i - b.size() + 1] = c;
      for (std::size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] -= c * b[j];
    }
    trim(a);
    return {q, a};
  }

  long m_;
  std::vector<Int> num_;
  Int den_;
};

inline CyclotomicNumber root_of_unity(long m, long b) { return CyclotomicNumber::root_of_unity(m, b); }

}  // namespace hlift
