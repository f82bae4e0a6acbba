#pragma once

// Positive definite binary quadratic forms [A, B, C] with N | A, their
// Gamma_0(N)-classes, genus characters, CM points alpha_Q = (-B + i sqrt|D|)/(2A),
// and twisted traces of singular moduli.

#include <array>
#include <functional>
#include <set>

#include "hlift/forms.hpp"
#include "hlift/report.hpp"

namespace hlift {

class RepresentativeNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InsufficientTruncation : public std::runtime_error {
 public:
  InsufficientTruncation(const std::string& msg, long need) : std::runtime_error(msg), required_order(need) {}
  long required_order;
};
class RecognitionFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadForm {
  long a = 1, b = 0, c = 1;

  long disc() const { return b * b - 4 * a * c; }
  long operator()(long x, long y) const { return a * x * x + b * x * y + c * y * y; }
  friend bool operator==(const QuadForm& p, const QuadForm& q) { return p.a == q.a && p.b == q.b && p.c == q.c; }
  friend bool operator<(const QuadForm& p, const QuadForm& q) {
    return std::tie(p.a, p.b, p.c) < std::tie(q.a, q.b, q.c);
  }
  std::string str() const {
    return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
  }
};

using Mat2 = std::array<long, 4>;  // row major [[m0, m1], [m2, m3]]

inline Mat2 mat_mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

/// (Q.g)(x, y) = Q(g (x, y)^T); alpha_{Q.g} = g^{-1} alpha_Q.
inline QuadForm act(const QuadForm& q, const Mat2& g) {
  long al = g[0], be = g[1], ga = g[2], de = g[3];
  return {q(al, ga), 2 * q.a * al * be + q.b * (al * de + be * ga) + 2 * q.c * ga * de, q(be, de)};
}

/// SL_2(Z)-reduction: returns (Q0, g) with Q0 = Q.g reduced.
inline std::pair<QuadForm, Mat2> reduce_form(QuadForm q) {
  if (q.disc() >= 0 || q.a <= 0) throw DomainError("reduce_form: form must be positive definite");
  Mat2 g{1, 0, 0, 1};
  for (;;) {
    long k = floor_div(q.a - q.b, 2 * q.a);
    if (k != 0) {
      Mat2 t{1, k, 0, 1};
      q = act(q, t);
      g = mat_mul(g, t);
    }
    if (q.a > q.c) {
      Mat2 s{0, -1, 1, 0};
      q = act(q, s);
      g = mat_mul(g, s);
      continue;
    }
    break;
  }
  if (q.a == q.c && q.b < 0) {
    Mat2 s{0, -1, 1, 0};
    q = act(q, s);
    g = mat_mul(g, s);
  }
  return {q, g};
}

/// Reduced forms of discriminant D < 0 (primitive or not).
inline std::vector<QuadForm> reduced_forms(long D) {
  if (D >= 0 || mod(D, 4) > 1) throw DomainError("reduced_forms: invalid discriminant " + std::to_string(D));
  std::vector<QuadForm> out;
  for (long a = 1; 3 * a * a <= -D; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b - D;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      out.push_back({a, b, c});
    }
  return out;
}

/// Elements of SL_2(Z) fixing a reduced form (all signs).
inline std::vector<Mat2> automorphisms(const QuadForm& q) {
  std::vector<Mat2> out;
  for (long e0 = -1; e0 <= 1; ++e0)
    for (long e1 = -1; e1 <= 1; ++e1)
      for (long e2 = -1; e2 <= 1; ++e2)
        for (long e3 = -1; e3 <= 1; ++e3) {
          Mat2 h{e0, e1, e2, e3};
          if (e0 * e3 - e1 * e2 == 1 && act(q, h) == q) out.push_back(h);
        }
  return out;
}

namespace detail {
// Canonical representative of (x : y) in P^1(Z/N).
inline std::pair<long, long> p1_normalize(long x, long y, long N) {
  std::pair<long, long> best{N, N};
  for (long l = 1; l < N || (N == 1 && l == 1); ++l) {
    if (std::gcd(l, N) != 1) continue;
    std::pair<long, long> c{mod(l * x, N), mod(l * y, N)};
    best = std::min(best, c);
  }
  return best;
}
inline std::vector<std::pair<long, long>> p1_points(long N) {
  std::set<std::pair<long, long>> s;
  for (long x = 0; x < N; ++x)
    for (long y = 0; y < N; ++y)
      if (std::gcd(std::gcd(x, y), N) == 1) s.insert(p1_normalize(x, y, N));
  if (N == 1) s.insert({0, 0});
  return {s.begin(), s.end()};
}
inline long ext_gcd(long a, long b, long& x, long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  long x1, y1;
  long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}
}  // namespace detail

/// Gamma_0(N)-class of a form with N | A: reduced form plus canonical point.
struct ClassKey {
  QuadForm reduced;
  std::pair<long, long> point;
  friend bool operator<(const ClassKey& x, const ClassKey& y) {
    return std::tie(x.reduced, x.point) < std::tie(y.reduced, y.point);
  }
  friend bool operator==(const ClassKey& x, const ClassKey& y) {
    return x.reduced == y.reduced && x.point == y.point;
  }
};

inline ClassKey class_key(const QuadForm& q, long N) {
  if (mod(q.a, N) != 0) throw DomainError("class_key: N must divide A");
  auto [q0, g] = reduce_form(q);
  long x = g[3], y = -g[2];  // first column of g^{-1}
  std::pair<long, long> best{N + 1, N + 1};
  for (const Mat2& h : automorphisms(q0)) best = std::min(best, detail::p1_normalize(h[0] * x + h[1] * y, h[2] * x + h[3] * y, N));
  return {q0, best};
}

/// Fricke involution on forms with N | A: [N a', b, c] -> [N c, -b, a'].
inline QuadForm fricke(const QuadForm& q, long N) {
  if (mod(q.a, N) != 0) throw DomainError("fricke: N must divide A");
  return {N * q.c, -q.b, q.a / N};
}

struct HeegnerClass {
  QuadForm form;   // representative with minimal A in its class
  long stabilizer;  // order in Gamma_0(N) / {+-1}
  ClassKey key;
};

/// Gamma_0(N)-classes of forms [A, B, C], N | A, of discriminant D; with r,
/// restricted to B = r mod 2N.
inline std::vector<HeegnerClass> enumerate_classes(long D, long N, std::optional<long> r = std::nullopt) {
  if (N < 1) throw DomainError("enumerate_classes: N must be positive");
  if (r && mod(*r * *r - D, 4 * N) != 0) throw DomainError("enumerate_classes: r^2 must be D mod 4N");
  std::vector<HeegnerClass> out;
  auto pts = detail::p1_points(N);
  for (const QuadForm& q0 : reduced_forms(D)) {
    auto aut = automorphisms(q0);
    std::set<std::pair<long, long>> seen;
    for (auto [px, py] : pts) {
      if (mod(q0(px, py), N) != 0) continue;
      std::pair<long, long> canon{N + 1, N + 1};
      long fix = 0;
      for (const Mat2& h : aut) {
        auto img = detail::p1_normalize(h[0] * px + h[1] * py, h[2] * px + h[3] * py, N);
        canon = std::min(canon, img);
        if (img == std::make_pair(px, py)) ++fix;
      }
      if (!seen.insert(canon).second) continue;
      // coprime lift with minimal value
      long bound = 2 * N + 2, bx = 0, by = 0, bv = -1;
      for (long x = -bound; x <= bound; ++x)
        for (long y = -bound; y <= bound; ++y) {
          if (std::gcd(x, y) != 1) continue;
          if (detail::p1_normalize(x, y, N) != std::make_pair(px, py)) continue;
          long v = q0(x, y);
          if (bv < 0 || v < bv) bv = v, bx = x, by = y;
        }
      if (bv < 0) throw DomainError("enumerate_classes: no lift found");
      long u, v;
      detail::ext_gcd(bx, by, v, u);  // bx v + by u = 1
      Mat2 g{bx, -u, by, v};
      QuadForm q = act(q0, g);
      long k = floor_div(q.a - q.b, 2 * q.a);
      q = act(q, {1, k, 0, 1});
      out.push_back({q, fix / 2, ClassKey{q0, canon}});
    }
  }
  if (r) {
    // B mod 2N is a Gamma_0(N)-invariant
    std::vector<HeegnerClass> kept;
    for (auto& c : out)
      if (mod(c.form.b - *r, 2 * N) == 0) kept.push_back(c);
    return kept;
  }
  return out;
}

/// chi_Delta of [N a', b, c]: (Delta / n) for n > 0 represented by the form
/// and prime to Delta; 0 when gcd(a', b, c, Delta) > 1.
inline int genus_character(const QuadForm& q, long delta, long N) {
  if (delta == 1) return 1;
  if (mod(q.a, N) != 0) throw DomainError("genus_character: N must divide A");
  long ap = q.a / N;
  if (std::gcd(std::gcd(std::gcd(ap, q.b), q.c), delta) != 1) return 0;
  if (mod(q.disc(), delta) != 0) return 0;
  for (long bound = 8; bound <= 1024; bound *= 2) {
    for (long x = 0; x <= bound; ++x)
      for (long y = -bound; y <= bound; ++y) {
        long n = q(x, y);
        if (n > 0 && std::gcd(n, delta) == 1) return kronecker(delta, n);
      }
  }
  throw RepresentativeNotFound("genus_character: no represented value prime to Delta for " + q.str());
}

/// alpha_Q as (real part, multiplier of sqrt|D|).
struct CMPoint {
  Rat re;
  Rat im_over_sqrt;  // Im = im_over_sqrt * sqrt(|D|)
  long absdisc;

  Complex value(mpfr_prec_t prec) const {
    Real s = sqrt(Real(absdisc, prec));
    return Complex(Real(re, prec), Real(im_over_sqrt, prec) * s);
  }
};

inline CMPoint cm_point(const QuadForm& q) {
  if (q.a <= 0 || q.disc() >= 0) throw DomainError("cm_point: form must be positive definite");
  Rat re(-q.b, 2 * q.a), im(1, 2 * q.a);
  re.canonicalize();
  im.canonicalize();
  return {re, im, -q.disc()};
}

struct CMValue {
  Complex value;
  double error_bound;
};

/// Evaluate an integral-exponent series at z by Horner in q = e^{2 pi i z}.
inline Complex evaluate_series(const ZSeries& f, const Complex& z, mpfr_prec_t prec) {
  Complex q = exp_2pi_i(Complex(z.re * Real(1L, prec), z.im * Real(1L, prec)));
  Complex s(prec);
  for (long e = f.trunc() - 1; e >= f.val(); --e) {
    s = s * q;
    const Int& c = f.at(e);
    if (c != 0) s.re += Real(c, prec);
  }
  long v = f.val();
  if (v < 0) {
    Complex qi = Complex(Real(1L, prec), Real(prec)) / q, p(Real(1L, prec), Real(prec));
    for (long i = 0; i < -v; ++i) p = p * qi;
    s = s * p;
  } else {
    for (long i = 0; i < v; ++i) s = s * q;
  }
  return s;
}

/// QSeries evaluation with a crude tail check on the last known coefficients.
inline CMValue evaluate_at_cm(const QSeries& f, const CMPoint& z, mpfr_prec_t prec) {
  if (!f.integral_exponents()) throw DomainError("evaluate_at_cm: integral exponents required");
  ZSeries g = ZSeries::from_qseries(f);
  double im = z.im_over_sqrt.get_d() * std::sqrt(static_cast<double>(z.absdisc));
  double lq = -2 * M_PI * im;  // log |q|
  double top = -HUGE_VAL;
  long T = g.trunc();
  for (long e = std::max(g.val(), T - 8); e < T; ++e)
    if (g.at(e) != 0) top = std::max(top, mpz_sizeinbase(g.at(e).get_mpz_t(), 2) * M_LN2 + e * lq);
  double tail = top + lq - std::log1p(-std::exp(lq));
  double budget = -(static_cast<double>(prec) / 2) * M_LN2;
  if (tail > budget) {
    long need = T + static_cast<long>(std::ceil((tail - budget) / -lq)) + 1;
    throw InsufficientTruncation("evaluate_at_cm: truncation too short", need);
  }
  return {evaluate_series(g, z.value(prec), prec), std::exp(tail)};
}

/// J_n(z) for Im z >= sqrt(3)/2, with truncation chosen from the coefficient
/// growth bound c(m) <= exp(4 pi sqrt(n m)).
inline Complex evaluate_faber_J(long n, const Complex& z, mpfr_prec_t prec) {
  double y = z.im.to_double();
  if (n == 0) return Complex(Real(1L, prec), Real(prec));
  double target = (static_cast<double>(prec) + 2 * M_PI * y * n / M_LN2 + 16) * M_LN2;
  long T = 1;
  while (4 * M_PI * std::sqrt(static_cast<double>(n) * T) - 2 * M_PI * y * T > -target) ++T;
  return evaluate_series(faber_J_z(n, T + 1), z, prec);
}

enum class TraceVariant { full, restricted, plus };

struct TraceResult {
  Rat value_over_sqrt_delta;
  double residual = 0;
  long classes = 0;
  Complex numeric{64};
};

/// Sum of chi_Delta(Q) / |stab| * f(alpha_Q) over classes of discriminant -d Delta.
/// f receives the class representative and the working precision.
inline TraceResult twisted_trace(const std::function<Complex(const QuadForm&, mpfr_prec_t)>& f, long delta, long d,
                                 long N, TraceVariant variant, mpfr_prec_t prec, long denom = 12) {
  if (delta < 1 || !is_fundamental(delta)) throw DomainError("twisted_trace: Delta must be a positive fundamental discriminant");
  long D = -d * delta;
  if (d <= 0 || mod(D, 4) > 1) throw DomainError("twisted_trace: -d Delta must be a discriminant");
  std::optional<long> r;
  if (variant == TraceVariant::restricted) {
    for (long x = 0; x < 2 * N; ++x)
      if (mod(x * x - D, 4 * N) == 0) {
        r = x;
        break;
      }
    if (!r) throw DomainError("twisted_trace: -d Delta is not a square mod 4N");
  }
  auto cls = enumerate_classes(D, N, r);
  TraceResult res;
  Complex sum(prec);
  std::set<ClassKey> done;
  for (const auto& c : cls) {
    int chi = genus_character(c.form, delta, N);
    if (chi == 0) continue;
    long stab = c.stabilizer;
    if (variant == TraceVariant::plus) {
      if (done.count(c.key)) continue;
      ClassKey wk = class_key(fricke(c.form, N), N);
      done.insert(c.key);
      if (wk == c.key)
        stab *= 2;
      else
        done.insert(wk);
    }
    ++res.classes;
    Complex v = f(c.form, prec);
    sum += v * Real(Rat(chi, stab), prec);
  }
  res.numeric = sum;
  Real sd = sqrt(Real(delta, prec));
  Real x = sum.re / sd;
  Real scaled = x * Real(denom, prec);
  Int k = scaled.round();
  Rat val(k, denom);
  val.canonicalize();
  res.value_over_sqrt_delta = val;
  Real err = abs(x - Real(val, prec));
  Real ierr = abs(sum.im);
  res.residual = std::max(err.to_double(), ierr.to_double());
  return res;
}

/// H_N(Delta, d) = Tr_{Delta,d,N}(1), exact.
inline Rat class_number(long delta, long d, long N, TraceVariant variant = TraceVariant::full) {
  long D = -d * delta;
  if (d <= 0 || mod(D, 4) > 1) throw DomainError("class_number: -d Delta must be a discriminant");
  std::optional<long> r;
  if (variant == TraceVariant::restricted) {
    for (long x = 0; x < 2 * N; ++x)
      if (mod(x * x - D, 4 * N) == 0) {
        r = x;
        break;
      }
    if (!r) throw DomainError("class_number: -d Delta is not a square mod 4N");
  }
  Rat s = 0;
  std::set<ClassKey> done;
  for (const auto& c : enumerate_classes(D, N, r)) {
    int chi = genus_character(c.form, delta, N);
    if (chi == 0) continue;
    long stab = c.stabilizer;
    if (variant == TraceVariant::plus) {
      if (done.count(c.key)) continue;
      ClassKey wk = class_key(fricke(c.form, N), N);
      done.insert(c.key);
      if (wk == c.key)
        stab *= 2;
      else
        done.insert(wk);
    }
    s += Rat(chi, stab);
  }
  s.canonicalize();
  return s;
}

/// Tr_{Delta,d}(J_n) / sqrt(Delta) at level one by CM evaluation.
inline TraceResult trace_J(long n, long delta, long d, mpfr_prec_t prec) {
  auto f = [n](const QuadForm& q, mpfr_prec_t p) {
    auto [q0, g] = reduce_form(q);
    return evaluate_faber_J(n, cm_point(q0).value(p), p);
  };
  double ymax = std::sqrt(static_cast<double>(d * delta)) / 2;
  mpfr_prec_t work = prec + static_cast<mpfr_prec_t>(2 * M_PI * ymax * n / M_LN2) + 32;
  return twisted_trace(f, delta, d, 1, TraceVariant::full, work);
}

}  // namespace hlift
