#pragma once

// Dense integer Laurent series. This is the workhorse for long expansions;
// products go through Kronecker substitution into a single GMP multiply.

#include <algorithm>
#include <utility>
#include <vector>

#include "hlift/qseries.hpp"

namespace hlift {

namespace detail {

inline std::size_t max_bits(const std::vector<Int>& v, std::size_t lo, std::size_t hi) {
  std::size_t b = 0;
  for (std::size_t i = lo; i < hi; ++i)
    if (v[i] != 0) b = std::max(b, mpz_sizeinbase(v[i].get_mpz_t(), 2));
  return b;
}

inline void kron_pack(mpz_ptr out, const Int* c, std::size_t n, mp_bitcnt_t bits) {
  if (n <= 32) {
    mpz_set_ui(out, 0);
    for (std::size_t i = n; i-- > 0;) {
      mpz_mul_2exp(out, out, bits);
      mpz_add(out, out, c[i].get_mpz_t());
    }
    return;
  }
  std::size_t k = n / 2;
  mpz_t hi;
  mpz_init(hi);
  kron_pack(hi, c + k, n - k, bits);
  kron_pack(out, c, k, bits);
  mpz_mul_2exp(hi, hi, bits * k);
  mpz_add(out, out, hi);
  mpz_clear(hi);
}

// X holds sum c_i 2^{bits i} with |c_i| < 2^{bits-1}; X is consumed.
inline void kron_unpack(Int* out, mpz_ptr X, std::size_t n, mp_bitcnt_t bits) {
  if (n <= 32) {
    mpz_t r;
    mpz_init(r);
    for (std::size_t i = 0; i < n; ++i) {
      mpz_fdiv_r_2exp(r, X, bits);
      if (mpz_sizeinbase(r, 2) >= bits && mpz_sgn(r) != 0) {
        // r >= 2^{bits-1}
        mpz_t t;
        mpz_init_set_ui(t, 1);
        mpz_mul_2exp(t, t, bits);
        mpz_sub(r, r, t);
        mpz_clear(t);
      }
      mpz_set(out[i].get_mpz_t(), r);
      mpz_sub(X, X, r);
      mpz_fdiv_q_2exp(X, X, bits);
    }
    mpz_clear(r);
    return;
  }
  std::size_t k = n / 2;
  mp_bitcnt_t kb = bits * k;
  mpz_t low;
  mpz_init(low);
  mpz_fdiv_r_2exp(low, X, kb);
  if (mpz_sgn(low) != 0 && mpz_sizeinbase(low, 2) >= kb) {
    mpz_t t;
    mpz_init_set_ui(t, 1);
    mpz_mul_2exp(t, t, kb);
    mpz_sub(low, low, t);
    mpz_clear(t);
  }
  mpz_sub(X, X, low);
  mpz_fdiv_q_2exp(X, X, kb);
  kron_unpack(out + k, X, n - k, bits);
  kron_unpack(out, low, k, bits);
  mpz_clear(low);
}

}  // namespace detail

/// Product of two dense integer coefficient vectors, keeping the first `len`
/// coefficients.
inline std::vector<Int> poly_mul(const std::vector<Int>& a, const std::vector<Int>& b, std::size_t len) {
  if (a.empty() || b.empty() || len == 0) return std::vector<Int>(len, Int(0));
  std::size_t na = std::min(a.size(), len), nb = std::min(b.size(), len);
  std::size_t ba = detail::max_bits(a, 0, na), bb = detail::max_bits(b, 0, nb);
  if (ba == 0 || bb == 0) return std::vector<Int>(len, Int(0));
  std::size_t nmin = std::min(na, nb);
  std::vector<Int> out(len, Int(0));
  if (nmin <= 8) {
    for (std::size_t i = 0; i < na; ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < nb && i + j < len; ++j)
        if (b[j] != 0) mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
    return out;
  }
  mp_bitcnt_t bits = ba + bb + 2;
  while ((std::size_t(1) << (bits - ba - bb - 2)) < nmin) ++bits;
  mpz_t A, B;
  mpz_init(A);
  mpz_init(B);
  detail::kron_pack(A, a.data(), na, bits);
  detail::kron_pack(B, b.data(), nb, bits);
  mpz_mul(A, A, B);
  mpz_clear(B);
  std::size_t nprod = na + nb - 1;
  std::vector<Int> full(nprod);
  detail::kron_unpack(full.data(), A, nprod, bits);
  mpz_clear(A);
  for (std::size_t i = 0; i < std::min(len, nprod); ++i) out[i].swap(full[i]);
  return out;
}

/// Sparse integer series given by (offset, coefficient) pairs.
using SparseTerms = std::vector<std::pair<long, long>>;

class ZSeries {
 public:
  ZSeries() = default;
  ZSeries(long val, std::vector<Int> c) : val_(val), c_(std::move(c)) {}

  /// Zero series known for exponents in [val, trunc).
  static ZSeries zero(long val, long trunc) { return ZSeries(val, std::vector<Int>(std::max(0L, trunc - val), Int(0))); }

  long val() const { return val_; }
  long trunc() const { return val_ + static_cast<long>(c_.size()); }
  std::vector<Int>& data() { return c_; }
  const std::vector<Int>& data() const { return c_; }

  /// Coefficient at exponent e (zero below the window).
  Int at(long e) const {
    if (e >= trunc()) throw DomainError("coefficient beyond truncation at " + std::to_string(e));
    if (e < val_) return Int(0);
    return c_[e - val_];
  }
  Int& ref(long e) { return c_.at(e - val_); }

  /// Exponent of the first nonzero coefficient, or trunc() for zero.
  long valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (c_[i] != 0) return val_ + static_cast<long>(i);
    return trunc();
  }

  ZSeries truncated(long T) const {
    T = std::min(T, trunc());
    if (T <= val_) return ZSeries(val_, {});
    return ZSeries(val_, std::vector<Int>(c_.begin(), c_.begin() + (T - val_)));
  }

  /// Re-window to start at exponent v (padding zeros, or dropping zero entries).
  ZSeries rebased(long v) const {
    if (v == val_) return *this;
    if (v < val_) {
      std::vector<Int> c(val_ - v, Int(0));
      c.insert(c.end(), c_.begin(), c_.end());
      return ZSeries(v, std::move(c));
    }
    for (long e = val_; e < std::min(v, trunc()); ++e)
      if (c_[e - val_] != 0) throw DomainError("rebased: dropping a nonzero coefficient");
    if (v >= trunc()) return ZSeries(v, {});
    return ZSeries(v, std::vector<Int>(c_.begin() + (v - val_), c_.end()));
  }

  /// Multiply by q^k.
  ZSeries shifted(long k) const { return ZSeries(val_ + k, c_); }

  ZSeries operator-() const {
    ZSeries r(*this);
    for (Int& x : r.c_) x = -x;
    return r;
  }

  friend ZSeries operator+(const ZSeries& f, const ZSeries& g) { return add(f, g, 1); }
  friend ZSeries operator-(const ZSeries& f, const ZSeries& g) { return add(f, g, -1); }
  ZSeries& operator+=(const ZSeries& o) { return *this = *this + o; }
  ZSeries& operator-=(const ZSeries& o) { return *this = *this - o; }

  friend ZSeries operator*(const Int& s, const ZSeries& f) {
    ZSeries r(f);
    for (Int& x : r.c_) x *= s;
    return r;
  }

  /// In-place f += s*g on the window of f (g must be known there).
  void addmul(const Int& s, const ZSeries& g) {
    if (g.trunc() < trunc()) throw DomainError("addmul: operand truncation too short");
    for (long e = std::max(val_, g.val_); e < trunc(); ++e) {
      const Int& y = g.c_[e - g.val_];
      if (y != 0) mpz_addmul(c_[e - val_].get_mpz_t(), s.get_mpz_t(), y.get_mpz_t());
    }
  }

  /// Exact division of every coefficient.
  ZSeries divexact(const Int& s) const {
    ZSeries r(*this);
    for (Int& x : r.c_) {
      if (x == 0) continue;
      if (!mpz_divisible_p(x.get_mpz_t(), s.get_mpz_t())) throw DomainError("divexact: not divisible");
      mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
    }
    return r;
  }

  friend ZSeries operator*(const ZSeries& f, const ZSeries& g) {
    long vf = f.valuation(), vg = g.valuation();
    long T = std::min(f.trunc() + vg, g.trunc() + vf);
    long v = vf + vg;
    if (T <= v) return ZSeries(std::min(v, T), std::vector<Int>(0));
    std::vector<Int> a(f.c_.begin() + (vf - f.val_), f.c_.end());
    std::vector<Int> b(g.c_.begin() + (vg - g.val_), g.c_.end());
    return ZSeries(v, poly_mul(a, b, static_cast<std::size_t>(T - v)));
  }
  ZSeries& operator*=(const ZSeries& o) { return *this = *this * o; }

  /// f * s where s = sum coeff q^off (offsets >= 0, first offset 0), keeping
  /// the truncation of f shifted by the valuation of s.
  ZSeries mul_sparse(const SparseTerms& s) const {
    ZSeries r = zero(val_, trunc());
    for (long e = val_; e < trunc(); ++e) {
      Int& out = r.c_[e - val_];
      for (const auto& [off, co] : s) {
        long src = e - off;
        if (src < val_) break;
        const Int& x = c_[src - val_];
        if (x == 0) continue;
        if (co >= 0)
          mpz_addmul_ui(out.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(co));
        else
          mpz_submul_ui(out.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(-co));
      }
    }
    return r;
  }

  /// f / s for sparse s with s(0) = +-1 and ascending offsets.
  ZSeries div_sparse(const SparseTerms& s) const {
    if (s.empty() || s[0].first != 0 || (s[0].second != 1 && s[0].second != -1))
      throw DomainError("div_sparse: leading term must be +-1");
    ZSeries r = zero(val_, trunc());
    for (long e = val_; e < trunc(); ++e) {
      Int acc = c_[e - val_];
      for (std::size_t i = 1; i < s.size(); ++i) {
        long src = e - s[i].first;
        if (src < val_) break;
        const Int& x = r.c_[src - val_];
        if (x == 0) continue;
        long co = s[i].second;
        if (co >= 0)
          mpz_submul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(co));
        else
          mpz_addmul_ui(acc.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(-co));
      }
      if (s[0].second == -1) acc = -acc;
      r.c_[e - val_].swap(acc);
    }
    return r;
  }

  /// q d/dq
  ZSeries theta() const {
    ZSeries r(*this);
    for (long e = val_; e < trunc(); ++e) r.c_[e - val_] *= e;
    return r;
  }

  /// q -> q^c
  ZSeries substitute_up(long c) const {
    ZSeries r = zero(val_ * c, trunc() * c - (c - 1));
    for (long e = val_; e < trunc(); ++e) r.c_[(e - val_) * c] = c_[e - val_];
    // last known exponent is (trunc-1)*c, extend knowledge to trunc*c
    r.c_.resize((trunc() - val_) * c, Int(0));
    return r;
  }

  /// The series sum_k a(m k + r) q^k.
  ZSeries decimate(long m, long r) const {
    long k0 = -floor_div(-(val_ - r), m);  // ceil((val - r)/m)
    long k1 = -floor_div(-(trunc() - r), m);
    ZSeries out = zero(k0, k1);
    for (long k = k0; k < k1; ++k) out.c_[k - k0] = c_[m * k + r - val_];
    return out;
  }

  QSeries to_qseries() const {
    QSeries q{Rat(trunc())};
    for (long e = val_; e < trunc(); ++e)
      if (c_[e - val_] != 0) q.set(Rat(e), CyclotomicNumber(c_[e - val_]));
    return q;
  }

  /// From a QSeries with integral exponents and integer coefficients.
  static ZSeries from_qseries(const QSeries& q) {
    const Rat& T = q.trunc();
    Int t;
    mpz_cdiv_q(t.get_mpz_t(), T.get_num_mpz_t(), T.get_den_mpz_t());
    long val = q.is_zero() ? t.get_si() : std::min(t.get_si(), q.valuation().get_num().get_si());
    ZSeries r = zero(val, t.get_si());
    for (const auto& [k, a] : q.terms()) {
      if (k % q.ram_index() != 0) throw DomainError("from_qseries: non-integral exponent");
      auto x = a.to_rational();
      if (!x || x->get_den() != 1) throw DomainError("from_qseries: non-integer coefficient");
      r.ref(k / q.ram_index()) = x->get_num();
    }
    return r;
  }

  friend bool operator==(const ZSeries& f, const ZSeries& g) {
    long v = std::min(f.val_, g.val_), T = std::min(f.trunc(), g.trunc());
    for (long e = v; e < T; ++e)
      if (f.at(e) != g.at(e)) return false;
    return true;
  }

 private:
  static ZSeries add(const ZSeries& f, const ZSeries& g, int sign) {
    long v = std::min(f.val_, g.val_), T = std::min(f.trunc(), g.trunc());
    ZSeries r = zero(v, T);
    for (long e = v; e < T; ++e) {
      Int& o = r.c_[e - v];
      if (e >= f.val_) o = f.c_[e - f.val_];
      if (e >= g.val_) {
        if (sign > 0)
          o += g.c_[e - g.val_];
        else
          o -= g.c_[e - g.val_];
      }
    }
    return r;
  }

  long val_ = 0;
  std::vector<Int> c_;
};

}  // namespace hlift
