#pragma once

// Weight 1/2 plus-space basis f_d = q^{-d} + sum A(n,d) q^n on Gamma_0(4),
// its Hecke images A_m(n,d), the prime-power action on basis indices, and
// the prime-power identities relating them.

#include <memory>
#include <mutex>

#include "hlift/hecke.hpp"
#include "hlift/report.hpp"

namespace hlift {

/// -d is a discriminant (d = 0 allowed).
inline bool admissible_index(long d) { return d >= 0 && (mod(d, 4) == 0 || mod(d, 4) == 3); }

/// Basis elements f_d for admissible d <= dmax, exponents below trunc.
/// Each f_d is stored as two series in x = q^4: f_d = F0(q^4) + q F1(q^4).
class PlusSpaceBasis {
 public:
  PlusSpaceBasis(long dmax, long T) : dmax_(dmax), trunc_(T) {
    if (dmax < 0 || T < 1) throw DomainError("plus-space basis: need dmax >= 0 and T >= 1");
    build();
  }

  long dmax() const { return dmax_; }
  long trunc() const { return trunc_; }

  /// A(n, d) for n < trunc; includes the principal part (A(-d, d) = 1).
  /// Indices beyond dmax are reached through the Hecke relations when possible.
  Int A(long n, long d) const {
    if (!admissible_index(d)) return Int(0);
    if (n >= trunc_) throw DomainError("A(" + std::to_string(n) + "," + std::to_string(d) + ") beyond truncation");
    if (mod(n, 4) > 1) return Int(0);
    if (d <= dmax_) return stored(n, d);
    return transferred(n, d);
  }

  /// f_d as an integer series on [-d, trunc).
  ZSeries series(long d) const {
    if (!admissible_index(d)) throw DomainError("f_" + std::to_string(d) + ": index must be 0 or 3 mod 4");
    ZSeries out = ZSeries::zero(-d, trunc_);
    for (long n = -d; n < trunc_; ++n) out.ref(n) = A(n, d);
    return out;
  }

 private:
  struct Parts {
    ZSeries f0, f1;
  };

  static long x_trunc(long T, long r) { return -floor_div(-(T - r), 4); }

  Int stored(long n, long d) const {
    const Parts& p = parts_.at(d);
    long r = mod(n, 4);
    if (r == 0) return p.f0.at(n / 4);
    if (r == 1) return p.f1.at((n - 1) / 4);
    return Int(0);
  }

  // f_{p^2 d1} from the scaled Hecke action on f_{d1}, for n >= 1.
  Int transferred(long n, long d) const {
    if (n <= 0) return n == -d ? Int(1) : Int(0);
    std::vector<long> ps = factor_primes(d);
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
      long p = *it, pp = p * p;
      if (d % pp != 0 || !admissible_index(d / pp)) continue;
      long d1 = d / pp;
      Int s = Int(p) * A(pp * n, d1) + Int(kronecker(n, p)) * A(n, d1);
      if (n % pp == 0) s += A(n / pp, d1);
      if (d1 % pp == 0) s -= Int(p) * A(n, d1 / pp);
      s -= Int(kronecker(-d1, p)) * A(n, d1);
      return s;
    }
    throw DomainError("A(n," + std::to_string(d) + "): index beyond the computed basis");
  }

  static std::vector<long> factor_primes(long d) {
    std::vector<long> ps;
    for (auto [p, e] : factor(d)) ps.push_back(static_cast<long>(p));
    return ps;
  }

  // Remove principal part below -d0 and the constant term using earlier elements.
  void echelonize(Parts& g, long top) const {
    for (long e = -(top - 1); e <= 0; ++e) {
      long d = -e;
      if (!admissible_index(d)) continue;
      long r = mod(e, 4);
      Int c = r == 0 ? g.f0.at(floor_div(e, 4)) : g.f1.at(floor_div(e - 1, 4));
      if (c == 0) continue;
      const Parts& b = parts_.at(d);
      g.f0.addmul(-c, b.f0.rebased(std::min(b.f0.val(), g.f0.val())));
      g.f1.addmul(-c, b.f1.rebased(std::min(b.f1.val(), g.f1.val())));
    }
  }

  void build() {
    long steps = dmax_ / 4 + 2;
    long X0 = x_trunc(trunc_, 0) + steps, X1 = x_trunc(trunc_, 1) + steps;
    long X = std::max(X0, X1) + 2;
    ZSeries J = j_z(X + 1);
    ZSeries th0 = theta_z(4 * X).decimate(4, 0), th1 = theta_z(4 * X + 1).decimate(4, 1);
    th0 = th0.truncated(X0);
    th1 = th1.truncated(X1);
    parts_[0] = Parts{th0, th1};
    if (dmax_ >= 3) {
      ZSeries G = e10_over_delta_z(X + 1);
      ZSeries dG = G.theta();
      // theta j(4 tau) + [theta, G(4 tau)]_1 / 4, split by residue
      ZSeries a0 = th0 * J + th0 * dG + Int(4) * (G * th0.theta());
      ZSeries a1 = th1 * J + th1 * dG + G * th1 + Int(4) * (G * th1.theta());
      Parts g{a0.rebased(-1).truncated(X0), a1.rebased(-1).truncated(X1)};
      if (g.f0.at(-1) != 0) throw DomainError("plus-space basis: construction failure at f_3");
      Int c0 = g.f0.at(0);
      g.f0.addmul(-c0, th0.rebased(-1));
      g.f1.addmul(-c0, th1.rebased(-1));
      Int lead = g.f1.at(-1);
      g.f0 = g.f0.divexact(lead);
      g.f1 = g.f1.divexact(lead);
      parts_[3] = std::move(g);
    }
    for (long d = 4; d <= dmax_; ++d) {
      if (!admissible_index(d)) continue;
      const Parts& b = parts_.at(d - 4);
      long v0 = -(d + 3) / 4 - 1;
      Parts g{(b.f0 * J).rebased(v0), (b.f1 * J).rebased(v0)};
      long t0 = std::min(g.f0.trunc(), X0), t1 = std::min(g.f1.trunc(), X1);
      g.f0 = g.f0.truncated(t0);
      g.f1 = g.f1.truncated(t1);
      echelonize(g, d);
      parts_[d] = std::move(g);
    }
    for (auto& [d, p] : parts_) {
      if (p.f0.trunc() < x_trunc(trunc_, 0) || p.f1.trunc() < x_trunc(trunc_, 1))
        throw DomainError("plus-space basis: truncation lost during construction");
    }
  }

  long dmax_, trunc_;
  std::map<long, Parts> parts_;
};

/// Shared basis covering (dmax, T); rebuilt only when a larger one is needed.
inline std::shared_ptr<const PlusSpaceBasis> plus_space_basis(long dmax, long T) {
  static std::mutex mu;
  static std::shared_ptr<const PlusSpaceBasis> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (cache && cache->dmax() >= dmax && cache->trunc() >= T) return cache;
  if (cache) {
    dmax = std::max(dmax, cache->dmax());
    T = std::max(T, cache->trunc());
  }
  cache.reset();
  cache = std::make_shared<const PlusSpaceBasis>(dmax, T);
  return cache;
}

namespace detail {
// Coefficient at n of f_d | S_{p_i^{e_i}} ... with S the scaled prime-power actions.
inline Int hecke_A_rec(const PlusSpaceBasis& B, const std::vector<std::pair<long, long>>& ops, std::size_t i,
                       long e, long n, long d) {
  if (mod(n, 4) > 1) return Int(0);  // plus space
  if (i == ops.size()) return B.A(n, d);
  if (e == 0) return hecke_A_rec(B, ops, i + 1, i + 1 < ops.size() ? ops[i + 1].second : 0, n, d);
  long p = ops[i].first, pp = p * p;
  // S_{p^e} = S_p S_{p^{e-1}} - p S_{p^{e-2}}
  Int s = Int(p) * hecke_A_rec(B, ops, i, e - 1, pp * n, d);
  s += Int(kronecker(n, p)) * hecke_A_rec(B, ops, i, e - 1, n, d);
  if (n % pp == 0) s += hecke_A_rec(B, ops, i, e - 1, n / pp, d);
  if (e >= 2) s -= Int(p) * hecke_A_rec(B, ops, i, e - 2, n, d);
  return s;
}
}  // namespace detail

/// A_m(n, d): coefficient of q^n (n >= 1) in the image of f_d under the
/// weight 1/2 Hecke operator of index m^2, scaled to be integral.
inline Int hecke_A(const PlusSpaceBasis& B, long m, long n, long d) {
  if (m < 1) throw DomainError("hecke_A: m must be positive");
  if (n < 1) throw DomainError("hecke_A: n must be positive");
  if (!admissible_index(d)) throw DomainError("hecke_A: d must be 0 or 3 mod 4");
  std::vector<std::pair<long, long>> ops;
  for (auto [p, e] : factor(m)) ops.emplace_back(static_cast<long>(p), static_cast<long>(e));
  return detail::hecke_A_rec(B, ops, 0, ops.empty() ? 0 : ops[0].second, n, d);
}

/// Integer combination of basis indices: d -> coefficient.
using BasisCombination = std::map<long, Int>;

/// f_d | p^m T_{1/2}(p^{2m}) in terms of the basis; f_x = 0 for inadmissible x.
inline BasisCombination bef_action(long d, long p, long m) {
  if (!is_prime(p)) throw InvalidPrime("bef_action: p must be prime");
  if (m < 0) throw DomainError("bef_action: m must be nonnegative");
  if (!admissible_index(d)) throw DomainError("bef_action: d must be 0 or 3 mod 4");
  BasisCombination out;
  auto add = [&](const Int& c, const Int& x) {
    if (c == 0 || !x.fits_slong_p()) return;
    long xi = x.get_si();
    if (!admissible_index(xi)) return;
    Int& slot = out[xi];
    slot += c;
    if (slot == 0) out.erase(xi);
  };
  if (d == 0) {
    // theta is an eigenform with eigenvalue 1 + p + ... + p^m
    Int c = 0;
    for (long i = 0; i <= m; ++i) c += pow_int(p, static_cast<unsigned>(i));
    out[0] = c;
    return out;
  }
  long u = 0, dp = d;
  while (dp % (p * p) == 0) {
    dp /= p * p;
    ++u;
  }
  auto P = [&](long e) { return pow_int(p, static_cast<unsigned>(e)); };
  if (m < u) {
    for (long t = 0; t <= m; ++t) add(P(m - t), P(2 * u - 2 * m + 4 * t) * dp);
  } else {
    int chi = kronecker(-dp, p);
    for (long t = 0; t <= m - u; ++t) {
      Int c = P(u);
      long ex = m - u - t;
      if (ex > 0) c *= chi == 0 ? Int(0) : Int(ex % 2 == 0 ? 1 : chi);
      add(c, P(2 * t) * dp);
    }
    for (long t = 1; t <= u; ++t) add(P(u - t), P(2 * m - 2 * u + 4 * t) * dp);
  }
  return out;
}

/// Coefficient family of f_d as a level-one vector-valued form, gamma = n mod 2.
inline std::shared_ptr<const VectorValuedCoefficients> family_from_basis(const PlusSpaceBasis& B, long d, long T) {
  if (T > B.trunc()) throw DomainError("family_from_basis: truncation exceeds the basis");
  auto fam = std::make_shared<VectorValuedCoefficients>();
  fam->level = 1;
  fam->dual_sign = 1;
  fam->trunc = T;
  for (long n = -d; n < T; ++n) {
    if (mod(n, 4) > 1) continue;
    Int a = B.A(n, d);
    if (a != 0) fam->set(n, mod(n, 2), Rat(a));
  }
  return fam;
}

inline Int cor42_lhs(const PlusSpaceBasis& B, long delta, long d, long p, long m, long n) {
  long l = std::min<long>(ord(n, p), m);
  Int s = 0;
  Int pm = pow_int(p, static_cast<unsigned>(m));
  for (long t = 0; t <= l; ++t) {
    Int idx = pm * n / pow_int(p, static_cast<unsigned>(2 * t));
    s += pow_int(p, static_cast<unsigned>(t)) * hecke_A(B, idx.get_si(), delta, d);
  }
  return s;
}

/// sum_t p^t A_{p^m n / p^{2t}}(Delta, d) against the basis expansion of
/// f_d | p^m T(p^{2m}) evaluated through A_n(Delta, .), for 1 <= n <= nmax.
inline VerificationReport verify_thm41(long delta, long d, long p, long m, long nmax) {
  Stopwatch sw;
  VerificationReport rep;
  rep.check = "thm41";
  rep.param("delta", delta).param("d", d).param("p", p).param("m", m).param("nmax", nmax);
  if (delta <= 1 || !is_fundamental(delta)) throw DomainError("thm41: Delta must be a fundamental discriminant > 1");
  if (!is_prime(p) || delta % p == 0) throw InvalidPrime("thm41: p must be a prime not dividing Delta");
  BasisCombination rhs = bef_action(d, p, m);
  auto B = plus_space_basis(20, delta * nmax * nmax * ipow(p, 2 * (m + ord(d, p) / 2)) + 1);
  rep.pass = true;
  for (long n = 1; n <= nmax; ++n) {
    Int lhs = cor42_lhs(*B, delta, d, p, m, n);
    Int r = 0;
    for (const auto& [x, c] : rhs) r += c * hecke_A(*B, n, delta, x);
    if (lhs != r) {
      rep.fail(std::to_string(n), to_string(Rat(lhs)) + " != " + to_string(Rat(r)));
      break;
    }
  }
  rep.runtime_ms = sw.ms();
  return rep;
}

/// The corollary form: right side sum_t (-d/p)^{m-t} A_n(Delta, p^{2t} d).
inline VerificationReport verify_cor42(long delta, long d, long p, long m, long nmax) {
  Stopwatch sw;
  VerificationReport rep;
  rep.check = "cor42";
  rep.param("delta", delta).param("d", d).param("p", p).param("m", m).param("nmax", nmax);
  if (delta <= 1 || !is_fundamental(delta)) throw DomainError("cor42: Delta must be a fundamental discriminant > 1");
  if (!is_prime(p) || delta % p == 0) throw InvalidPrime("cor42: p must be a prime not dividing Delta");
  if (ord(d, p) >= 2) throw DomainError("cor42: requires ord_p(d) < 2");
  auto B = plus_space_basis(20, delta * nmax * nmax * ipow(p, 2 * m) + 1);
  int chi = kronecker(-d, p);
  rep.pass = true;
  for (long n = 1; n <= nmax; ++n) {
    Int lhs = cor42_lhs(*B, delta, d, p, m, n);
    Int r = 0;
    for (long t = 0; t <= m; ++t) {
      long e = m - t;
      Int c = e == 0 ? Int(1) : (chi == 0 ? Int(0) : Int((e % 2 == 0) ? 1 : chi));
      if (c != 0) r += c * hecke_A(*B, n, delta, ipow(p, 2 * t) * d);
    }
    if (lhs != r) {
      rep.fail(std::to_string(n), to_string(Rat(lhs)) + " != " + to_string(Rat(r)));
      break;
    }
  }
  rep.runtime_ms = sw.ms();
  return rep;
}

}  // namespace hlift
