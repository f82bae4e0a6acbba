#pragma once

// Level-one and eta-quotient expansions: E_k, Delta, j, J_n, theta.
// The *_z variants return dense integer series and are used internally for
// long expansions; the others return QSeries.

#include <utility>
#include <vector>

#include "hlift/zseries.hpp"

namespace hlift {

/// prod_{n>=1} (1 - q^{step n}) as sparse terms with offsets < T.
inline SparseTerms euler_product(long T, long step = 1) {
  SparseTerms out;
  out.emplace_back(0, 1);
  for (long k = 1;; ++k) {
    long e1 = step * k * (3 * k - 1) / 2, e2 = step * k * (3 * k + 1) / 2;
    if (e1 >= T) break;
    long s = (k & 1) ? -1 : 1;
    out.emplace_back(e1, s);
    if (e2 < T) out.emplace_back(e2, s);
  }
  return out;
}

/// prod (1 - q^n)^3 = sum (-1)^n (2n+1) q^{n(n+1)/2}.
inline SparseTerms euler_cube(long T) {
  SparseTerms out;
  for (long n = 0; n * (n + 1) / 2 < T; ++n) out.emplace_back(n * (n + 1) / 2, (n & 1) ? -(2 * n + 1) : 2 * n + 1);
  return out;
}

/// sigma_k(n) for 0 < n < T by sieve (index 0 unused).
inline std::vector<Int> sigma_table(unsigned k, long T) {
  std::vector<Int> s(std::max(T, 1L), Int(0));
  for (long d = 1; d < T; ++d) {
    Int dk = pow_int(d, k);
    for (long m = d; m < T; m += d) s[m] += dk;
  }
  return s;
}

/// E_k for even k with integral normalization (k = 2, 4, 6, 8, 10, 14).
inline ZSeries eisenstein_z(int k, long T) {
  long c;
  switch (k) {
    case 2: c = -24; break;
    case 4: c = 240; break;
    case 6: c = -504; break;
    case 8: c = 480; break;
    case 10: c = -264; break;
    case 14: c = -24; break;
    default: throw DomainError("eisenstein: unsupported weight " + std::to_string(k));
  }
  std::vector<Int> s = sigma_table(k - 1, T);
  ZSeries e = ZSeries::zero(0, T);
  if (T > 0) e.ref(0) = 1;
  for (long n = 1; n < T; ++n) e.ref(n) = c * s[n];
  return e;
}

/// Delta = q prod (1-q^n)^24.
inline ZSeries delta_z(long T) {
  ZSeries s = ZSeries::zero(0, std::max(T - 1, 0L));
  if (T > 1) s.ref(0) = 1;
  SparseTerms cube = euler_cube(T);
  for (int i = 0; i < 8; ++i) s = s.mul_sparse(cube);
  return s.shifted(1);
}

/// Multiply (or divide, for negative power) by prod (1-q^n)^{24 |power|/3}.
inline ZSeries times_euler_cube_power(ZSeries s, int cubes) {
  SparseTerms cube = euler_cube(s.trunc() - s.val() + 1);
  for (int i = 0; i < std::abs(cubes); ++i) s = cubes > 0 ? s.mul_sparse(cube) : s.div_sparse(cube);
  return s;
}

/// j = E4^3/Delta = E4*E8/Delta.
inline ZSeries j_z(long T) {
  if (T < 0) throw DomainError("j: T must be nonnegative");
  ZSeries e4 = eisenstein_z(4, T + 1), e8 = eisenstein_z(8, T + 1);
  ZSeries num = e4 * e8;
  return times_euler_cube_power(num, -8).shifted(-1);
}

/// E10/Delta = q^{-1} - 240 - ..., the weight -2 form used for the plus-space basis.
inline ZSeries e10_over_delta_z(long T) {
  ZSeries e10 = eisenstein_z(10, T + 1);
  return times_euler_cube_power(e10, -8).shifted(-1);
}

/// J_n = q^{-n} + O(q), the normalized Hecke image of j - 744, computed from j.
inline ZSeries faber_J_z(long n, long T, const ZSeries* jser = nullptr) {
  if (n < 0) throw DomainError("faber_J: n must be nonnegative");
  if (n == 0) {
    ZSeries one = ZSeries::zero(0, T);
    if (T > 0) one.ref(0) = 1;
    return one;
  }
  ZSeries jl;
  if (!jser || jser->trunc() < n * (T - 1) + 1) {
    jl = j_z(n * std::max(T - 1, 1L) + 1);
    jser = &jl;
  }
  ZSeries out = ZSeries::zero(-n, T);
  out.ref(-n) = 1;
  for (long m = 1; m < T; ++m) {
    Int s = 0;
    long g = std::gcd(n, m);
    for (long e : divisors(g)) s += Int(n / e) * jser->at(n * m / (e * e));
    out.ref(m) = s;
  }
  return out;
}

/// Polynomial P (ascending integer coefficients) with P(h) = q^{-n} + O(q),
/// for a series h = q^{-1} + c0 + O(q).
inline std::vector<Int> faber_polynomial_of(const ZSeries& h, long n) {
  std::vector<Int> poly(n + 1, Int(0));
  poly[n] = 1;
  if (n == 0) return poly;
  // powers of h up to the constant term
  std::vector<ZSeries> pw(n + 1);
  if (h.trunc() < n + 1) throw DomainError("faber_polynomial_of: series known only below q^" + std::to_string(h.trunc()));
  ZSeries hs = h.truncated(n + 1);
  pw[0] = ZSeries::zero(0, n + 1);
  pw[0].ref(0) = 1;
  for (long k = 1; k <= n; ++k) pw[k] = pw[k - 1] * hs;
  ZSeries cur = pw[n];
  for (long e = -(n - 1); e <= 0; ++e) {
    Int c = cur.at(e);
    if (c == 0) continue;
    long k = -e;
    cur.addmul(-c, pw[k].rebased(cur.val()));
    poly[k] -= c;
  }
  return poly;
}

inline std::vector<Int> faber_polynomial(long n) {
  if (n < 0) throw DomainError("faber_polynomial: n must be nonnegative");
  return faber_polynomial_of(j_z(std::max(n, 1L) + 1), n);
}

/// theta = 1 + 2 sum q^{n^2}
inline ZSeries theta_z(long T) {
  ZSeries t = ZSeries::zero(0, T);
  if (T > 0) t.ref(0) = 1;
  for (long n = 1; n * n < T; ++n) t.ref(n * n) = 2;
  return t;
}

struct EtaQuotient {
  std::vector<std::pair<long, long>> factors;  // (delta, exponent)

  Rat valuation() const {
    Rat v = 0;
    for (auto [d, r] : factors) v += Rat(d * r, 24);
    v.canonicalize();
    return v;
  }
};

/// Integer part prod (1-q^{delta n})^{r} to relative length L.
inline ZSeries eta_product_z(const EtaQuotient& e, long L) {
  ZSeries s = ZSeries::zero(0, L);
  if (L > 0) s.ref(0) = 1;
  for (auto [d, r] : e.factors) {
    if (d < 1) throw DomainError("eta quotient: divisor must be positive");
    SparseTerms ep = euler_product(L, d);
    for (long i = 0; i < std::abs(r); ++i) s = r > 0 ? s.mul_sparse(ep) : s.div_sparse(ep);
  }
  return s;
}

inline QSeries eta_quotient_series(const EtaQuotient& e, const Rat& T) {
  Rat v = e.valuation();
  if (T < v) throw DomainError("eta_quotient_series: truncation below valuation");
  Rat rel = T - v;
  Int L;
  mpz_cdiv_q(L.get_mpz_t(), rel.get_num_mpz_t(), rel.get_den_mpz_t());
  ZSeries s = eta_product_z(e, L.get_si());
  QSeries out(T, v.get_den().get_si());
  for (long i = 0; i < s.trunc(); ++i)
    if (s.at(i) != 0) out.set(v + i, CyclotomicNumber(s.at(i)));
  return out;
}

// QSeries front ends; T is the exclusive truncation.

inline QSeries eisenstein(int k, long T) {
  if (k != 2 && k != 4 && k != 6) throw DomainError("eisenstein: unsupported weight " + std::to_string(k));
  if (T < 1) throw DomainError("eisenstein: T must be positive");
  return eisenstein_z(k, T).to_qseries();
}
inline QSeries delta_series(long T) { return delta_z(T).to_qseries(); }
inline QSeries j_series(long T) { return j_z(T).to_qseries(); }
inline QSeries faber_J(long n, long T) { return faber_J_z(n, T).to_qseries(); }
inline QSeries theta_kohnen(long T) { return theta_z(T).to_qseries(); }

}  // namespace hlift
