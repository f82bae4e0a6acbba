#pragma once

// Hecke operators: integral weight T_k(p) and T_k(p^m) on q-series, the
// p-scaled half-integral action on vector-valued coefficient families, and
// the multiplicative Hecke operator.

#include <map>
#include <optional>
#include <utility>

#include "hlift/forms.hpp"

namespace hlift {

class InvalidPrime : public DomainError {
 public:
  using DomainError::DomainError;
};

namespace detail {
inline Int ceil_rat(const Rat& r) {
  Int z;
  mpz_cdiv_q(z.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return z;
}
inline Int floor_rat(const Rat& r) {
  Int z;
  mpz_fdiv_q(z.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return z;
}
}  // namespace detail

/// Coefficient of q^n in f|T_k(p): c(pn) + p^{k-1} c(n/p).
inline QSeries hecke_integral(const QSeries& f, long k, long p) {
  if (!is_prime(p)) throw InvalidPrime("hecke_integral: p must be prime");
  if (!f.integral_exponents()) throw DomainError("hecke_integral: non-integral exponents");
  QSeries g = f.normalized();
  if (g.ram_index() != 1) g = g.with_ram_index(1);
  Rat T = f.trunc() / p;
  QSeries out(T);
  Rat pk = pow_rat(p, k - 1);
  long lo = g.is_zero() ? 0 : std::min(0L, g.valuation().get_num().get_si()) * p;
  long hi = detail::ceil_rat(T).get_si();
  for (long n = lo; n < hi; ++n) {
    CyclotomicNumber c = g.coeff(Rat(p * n));
    if (n % p == 0) {
      Rat e(n / p);
      if (e < g.trunc()) c += CyclotomicNumber(pk) * g.coeff(e);
    }
    if (!c.is_zero()) out.set(Rat(n), c);
  }
  return out;
}

/// T_k(p^m) by the recursion T(p^{m+1}) = T(p)T(p^m) - p^{k-1}T(p^{m-1}).
inline QSeries hecke_integral_power(const QSeries& f, long k, long p, long m) {
  if (m < 0) throw DomainError("hecke_integral_power: m must be nonnegative");
  if (m == 0) return f;
  QSeries prev = f, cur = hecke_integral(f, k, p);
  CyclotomicNumber pk(pow_rat(p, k - 1));
  for (long i = 1; i < m; ++i) {
    QSeries next = hecke_integral(cur, k, p) - pk * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Closed double-sum formula for the coefficient of q^n (n >= 1) in f|T_k(p^m).
inline CyclotomicNumber hecke_power_coefficient(const QSeries& f, long k, long p, long m, long n) {
  if (n < 1) throw DomainError("hecke_power_coefficient: n must be positive");
  long l = std::min<long>(ord(n, p), m);
  CyclotomicNumber s;
  Int pm = pow_int(p, static_cast<unsigned>(m));
  for (long t = 0; t <= l; ++t) {
    Rat e = Rat(pm * n) / Rat(pow_int(p, static_cast<unsigned>(2 * t)));
    e.canonicalize();
    s += CyclotomicNumber(pow_rat(p, (k - 1) * t)) * f.coeff(e);
  }
  return s;
}

/// Integer-series T_k(p) for k >= 1.
inline ZSeries hecke_integral_z(const ZSeries& f, long k, long p) {
  if (k < 1) throw DomainError("hecke_integral_z: weight must be positive");
  if (!is_prime(p)) throw InvalidPrime("hecke_integral_z: p must be prime");
  long T = detail::ceil_rat(Rat(f.trunc(), p)).get_si();
  long lo = std::min(0L, f.val()) * p;
  ZSeries out = ZSeries::zero(lo, T);
  Int pk = pow_int(p, static_cast<unsigned>(k - 1));
  for (long n = lo; n < T; ++n) {
    Int c = f.at(p * n);
    if (n % p == 0) c += pk * f.at(n / p);
    out.ref(n) = c;
  }
  return out;
}

/// Holomorphic-part coefficient family c(n, gamma), gamma mod 2N, of a
/// vector-valued weight-1/2 form. Entries are known for n < trunc.
struct VectorValuedCoefficients {
  long level = 1;
  Rat weight = Rat(1, 2);
  int dual_sign = 1;
  long trunc = 0;
  std::map<std::pair<long, long>, Rat> coeffs;  // key (n, gamma)

  long modulus() const { return 2 * level; }

  Rat get(long n, long gamma) const {
    if (n >= trunc) throw DomainError("coefficient family: n = " + std::to_string(n) + " beyond truncation");
    auto it = coeffs.find({n, mod(gamma, modulus())});
    return it == coeffs.end() ? Rat(0) : it->second;
  }

  void set(long n, long gamma, const Rat& v) {
    if (n >= trunc) return;
    auto key = std::make_pair(n, mod(gamma, modulus()));
    if (v == 0)
      coeffs.erase(key);
    else
      coeffs[key] = v;
  }

  long min_n() const { return coeffs.empty() ? 0 : coeffs.begin()->first.first; }

  /// Support congruence and gamma -> -gamma symmetry.
  bool check_invariants() const {
    for (const auto& [key, v] : coeffs) {
      auto [n, g] = key;
      if (mod(n - dual_sign * g * g, 4 * level) != 0) return false;
      // weight 1/2: c(n, -gamma) = c(n, gamma)
      if (get(n, -g) != v) return false;
    }
    return true;
  }

  friend VectorValuedCoefficients operator-(const VectorValuedCoefficients& a, const VectorValuedCoefficients& b) {
    return combine(a, b, -1);
  }
  friend VectorValuedCoefficients operator+(const VectorValuedCoefficients& a, const VectorValuedCoefficients& b) {
    return combine(a, b, 1);
  }
  friend VectorValuedCoefficients operator*(const Rat& s, const VectorValuedCoefficients& a) {
    VectorValuedCoefficients r = a;
    r.coeffs.clear();
    if (s != 0)
      for (const auto& [k, v] : a.coeffs) r.coeffs[k] = s * v;
    return r;
  }
  friend bool operator==(const VectorValuedCoefficients& a, const VectorValuedCoefficients& b) {
    long T = std::min(a.trunc, b.trunc);
    for (const auto& [k, v] : a.coeffs)
      if (k.first < T && b.get(k.first, k.second) != v) return false;
    for (const auto& [k, v] : b.coeffs)
      if (k.first < T && a.get(k.first, k.second) != v) return false;
    return true;
  }

 private:
  static VectorValuedCoefficients combine(const VectorValuedCoefficients& a, const VectorValuedCoefficients& b,
                                          int sign) {
    if (a.level != b.level || a.dual_sign != b.dual_sign) throw DomainError("coefficient families are incompatible");
    VectorValuedCoefficients r = a;
    r.trunc = std::min(a.trunc, b.trunc);
    r.coeffs.clear();
    for (const auto& [k, v] : a.coeffs)
      if (k.first < r.trunc) r.coeffs[k] = v;
    for (const auto& [k, v] : b.coeffs) {
      if (k.first >= r.trunc) continue;
      Rat x = r.get(k.first, k.second) + (sign > 0 ? v : Rat(-v));
      r.set(k.first, k.second, x);
    }
    return r;
  }
};

/// Scaled half-integral Hecke action p*T_{1/2}(p^2):
/// out(n, g) = p v(p^2 n, p g) + (sigma n / p) v(n, g) + v(n/p^2, g/p).
/// At level 1 with p = 2 the scalar Kohnen plus-space formula is used.
inline VectorValuedCoefficients hecke_half(const VectorValuedCoefficients& v, long p) {
  if (!is_prime(p)) throw InvalidPrime("hecke_half: p must be prime");
  long N = v.level, M = v.modulus();
  bool kohnen = (N == 1 && p == 2);
  if (!kohnen && std::gcd(p, M) != 1) throw InvalidPrime("hecke_half: p must be coprime to 2N");
  long pinv = 0;
  if (!kohnen)
    for (long x = 1; x < M || x == 1; ++x)
      if (mod(p * x, M) == 1 % M) {
        pinv = x;
        break;
      }
  VectorValuedCoefficients out = v;
  out.coeffs.clear();
  out.trunc = detail::ceil_rat(Rat(v.trunc, p * p)).get_si();
  long lo = std::min(0L, v.min_n()) * p * p;
  for (long n = lo; n < out.trunc; ++n) {
    for (long g = 0; g < M; ++g) {
      if (mod(n - v.dual_sign * g * g, 4 * N) != 0) continue;
      Rat s;
      if (kohnen) {
        // one component per n: gamma = n mod 2
        s = Rat(p) * v.get(p * p * n, mod(p * p * n, 2)) + Rat(kronecker(n, p)) * v.get(n, g);
        if (n % (p * p) == 0) s += v.get(n / (p * p), mod(n / (p * p), 2));
      } else {
        s = Rat(p) * v.get(p * p * n, p * g) + Rat(kronecker(v.dual_sign * n, p)) * v.get(n, g);
        if (n % (p * p) == 0) s += v.get(n / (p * p), g * pinv);
      }
      out.set(n, g, s);
    }
  }
  return out;
}

/// p^m T_{1/2}(p^{2m}) via S_{m+1} = S_1 S_m - p S_{m-1}.
inline VectorValuedCoefficients hecke_half_power(const VectorValuedCoefficients& v, long p, long m) {
  if (m < 0) throw DomainError("hecke_half_power: m must be nonnegative");
  if (m == 0) return v;
  VectorValuedCoefficients prev = v, cur = hecke_half(v, p);
  for (long i = 1; i < m; ++i) {
    VectorValuedCoefficients next = hecke_half(cur, p) - Rat(p) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

/// Multiplicative Hecke operator: eps * f(p tau) * prod_j f((tau+j)/p),
/// eps making the leading coefficient 1.
inline QSeries mult_hecke(const QSeries& f, long k, long N, long p) {
  (void)k;
  if (!is_prime(p)) throw InvalidPrime("mult_hecke: p must be prime");
  if (N % p == 0) throw InvalidPrime("mult_hecke: p divides the level");
  if (f.is_zero()) throw DomainError("mult_hecke: zero input");
  QSeries prod = f.substitute_up(p);
  for (long j = 0; j < p; ++j) prod = prod * f.slash_shift(p, j);
  prod = prod.normalized();
  if (!prod.integral_exponents()) throw DomainError("mult_hecke: non-integral exponents in collected product");
  if (prod.is_zero()) throw DomainError("mult_hecke: product vanishes to truncation");
  CyclotomicNumber eps = prod.leading_coefficient().inv();
  return (eps * prod).normalized();
}

}  // namespace hlift
