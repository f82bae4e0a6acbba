#pragma once

// Integer helpers shared by every module: big integers, Kronecker symbols,
// divisor functions and discriminant predicates.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hlift {

using Int = mpz_class;
using Rat = mpq_class;

/// Thrown when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

inline long ipow(long base, unsigned e) {
  long r = 1;
  while (e--) r *= base;
  return r;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorization as (prime, exponent) pairs, ascending.
inline std::vector<std::pair<long, int>> factor(long n) {
  if (n <= 0) throw DomainError("factor: n must be positive");
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline std::vector<long> divisors(long n) {
  std::vector<long> lo, hi;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

/// p-adic valuation of n != 0.
inline int ord(long n, long p) {
  if (n == 0) throw DomainError("ord: zero argument");
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return e;
}

inline bool is_square(long n) {
  if (n < 0) return false;
  long r = static_cast<long>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r * r == n;
}

inline bool is_squarefree(long n) {
  if (n == 0) return false;
  if (n < 0) n = -n;
  for (auto [p, e] : factor(n))
    if (e > 1) return false;
  return true;
}

/// Euler's totient.
inline long euler_phi(long n) {
  long r = n;
  for (auto [p, e] : factor(n)) r = r / p * (p - 1);
  return r;
}

inline int moebius(long n) {
  int s = 1;
  for (auto [p, e] : factor(n)) {
    if (e > 1) return 0;
    s = -s;
  }
  return s;
}

/// Kronecker symbol (a/n) for arbitrary integers a, n.
inline int kronecker(long a, long n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // factor out powers of two from n
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v > 0) {
    if (a % 2 == 0) return 0;
    long r8 = mod(a, 8);
    if ((v & 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (a/n), n odd positive
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      long r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

/// The character b -> (Delta/b) on residues mod Delta, with the convention
/// that b = 0 gives 1 when Delta = 1 and 0 otherwise.
inline int delta_character(long delta, long b) {
  if (delta == 1) return 1;
  if (mod(b, delta) == 0) return 0;
  return kronecker(delta, b);
}

/// Fundamental discriminant test; 1 counts as fundamental.
inline bool is_fundamental(long D) {
  if (D == 1) return true;
  if (D == 0) return false;
  long m = mod(D, 4);
  if (m == 1) return is_squarefree(D);
  if (m == 0) {
    long q = D / 4;
    long r = mod(q, 4);
    return (r == 2 || r == 3) && is_squarefree(q);
  }
  return false;
}

/// sigma_k(n) = sum of d^k over divisors d of n.
inline Int sigma(unsigned k, long n) {
  Int s = 0;
  for (long d : divisors(n)) {
    Int t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), k);
    s += t;
  }
  return s;
}

inline Int pow_int(long base, unsigned e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), Int(base).get_mpz_t(), e);
  return r;
}

/// p^e as a rational, e may be negative.
inline Rat pow_rat(long p, long e) {
  if (e >= 0) return Rat(pow_int(p, static_cast<unsigned>(e)));
  return Rat(Int(1), pow_int(p, static_cast<unsigned>(-e)));
}

inline std::string to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Parses "a" or "a/b".
inline Rat parse_rat(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw DomainError("malformed rational: " + s);
  r.canonicalize();
  return r;
}

inline long to_long(const Int& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit in long");
  return z.get_si();
}

/// Bernoulli number B_n (B_1 = -1/2).
inline Rat bernoulli(unsigned n) {
  std::vector<Rat> a(n + 1);
  Rat result;
  // Akiyama-Tanigawa
  for (unsigned m = 0; m <= n; ++m) {
    a[m] = Rat(1, m + 1);
    for (unsigned j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
  }
  result = a[0];
  if (n == 1) result = -result;
  return result;
}

}  // namespace hlift
