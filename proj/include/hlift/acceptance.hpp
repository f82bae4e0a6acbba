#pragma once

// The acceptance suite: one verdict per criterion.

#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "hlift/borcherds.hpp"
#include "hlift/genus1.hpp"
#include "hlift/heegner.hpp"
#include "hlift/zagier.hpp"

namespace hlift {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  long ms = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["criterion"] = id;
    j["name"] = name;
    j["pass"] = pass;
    j["detail"] = detail;
    return j;
  }
};

struct AcceptanceOptions {
  std::string config_path = default_config_path();
  /// Called with every per-instance report; may be empty.
  std::function<void(const VerificationReport&)> on_report;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult&)> on_criterion;
};

namespace acceptance {

/// Collects failures of one criterion.
class Tally {
 public:
  void add(const VerificationReport& r, const AcceptanceOptions& o) {
    ++count_;
    if (o.on_report) o.on_report(r);
    if (!r.pass) {
      std::ostringstream s;
      s << r.check << "(";
      for (std::size_t i = 0; i < r.params.size(); ++i) s << (i ? "," : "") << r.params[i].first << "=" << r.params[i].second;
      s << ")@" << r.first_mismatch.value_or("?");
      failures_.push_back(s.str());
    }
  }
  void fail(const std::string& what) {
    ++count_;
    failures_.push_back(what);
  }
  void ok() { ++count_; }
  bool pass() const { return failures_.empty(); }
  std::string summary() const {
    std::string s = std::to_string(count_ - failures_.size()) + "/" + std::to_string(count_) + " pass";
    if (!failures_.empty()) {
      s += "; failing:";
      for (const auto& f : failures_) s += " " + f;
    }
    return s;
  }

 private:
  std::size_t count_ = 0;
  std::vector<std::string> failures_;
};

inline BorcherdsProductData twelve_theta(long T) {
  auto fam = std::make_shared<VectorValuedCoefficients>();
  fam->trunc = T;
  for (long n = 0; n * n < T; ++n) fam->set(n * n, n, Rat(n == 0 ? 12 : 24));
  return product_data_from_family(fam, 1, 1, Rat(1));
}

inline BorcherdsProductData basis_data(long delta, long d, long nmax) {
  long need = delta * (nmax + 1) * (nmax + 1);
  auto B = plus_space_basis(std::max(d, 4L), need);
  return product_data_from_family(family_from_basis(*B, d, need), delta, delta % 2, Rat(0));
}

struct ProductCase {
  long delta, d, p;
};
inline const std::vector<ProductCase>& product_grid() {
  static const std::vector<ProductCase> g = {{5, 3, 2}, {5, 3, 3}, {8, 4, 3}, {13, 3, 2}, {1, 0, 2}};
  return g;
}

inline BorcherdsProductData product_case_data(const ProductCase& c) {
  return c.delta == 1 ? twelve_theta(2600) : basis_data(c.delta, c.d, 16 * c.p + 1);
}

inline std::vector<long> small_indices() {
  std::vector<long> out;
  for (long d = 3; d <= 20; ++d)
    if (admissible_index(d)) out.push_back(d);
  return out;
}

inline const Genus1Level& level(long N, const std::string& path) {
  static std::map<std::pair<long, std::string>, std::unique_ptr<Genus1Level>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{N, path}];
  if (!slot) slot = std::make_unique<Genus1Level>(N, read_curve_config(path).at(N));
  return *slot;
}

inline CriterionResult named(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

inline std::string fmt_ms(long ms) { return std::to_string(ms) + " ms"; }

inline CriterionResult c1(const AcceptanceOptions&) {
  Stopwatch sw;
  CriterionResult r = named(1, "j-expansion");
  ZSeries j = j_z(50);
  long ms = sw.ms();
  const long want[] = {1, 744, 196884, 21493760};
  r.pass = j.val() == -1 && ms < 1000;
  for (long e = -1; e <= 2; ++e)
    if (j.at(e) != want[e + 1]) r.pass = false;
  r.detail = "(" + j.at(-1).get_str() + ", " + j.at(0).get_str() + ", " + j.at(1).get_str() + ", " + j.at(2).get_str() +
             "), T=50 in " + fmt_ms(ms);
  return r;
}

inline CriterionResult c2(const AcceptanceOptions&) {
  CriterionResult r = named(2, "log-derivative of Delta");
  QSeries ld = log_derivative(delta_series(52), 12);
  long top = detail::ceil_rat(ld.trunc()).get_si() - 1;
  bool zero = top >= 50;
  for (long e = -1; e <= 50 && zero; ++e)
    if (!ld.coeff(e).is_zero()) zero = false;
  r.pass = zero;
  r.detail = zero ? "zero through q^50" : "nonzero coefficient or truncation below q^50";
  return r;
}

inline CriterionResult c3(const AcceptanceOptions& o) {
  CriterionResult r = named(3, "Faber duality");
  Tally t;
  t.add(faber_duality(11), o);
  r.pass = t.pass();
  r.detail = "0 <= n <= 10; " + t.summary();
  return r;
}

inline CriterionResult product_criterion(int id, const char* name, const AcceptanceOptions& o, bool closed) {
  CriterionResult r = named(id, name);
  Tally t;
  long slowest = 0;
  for (const auto& c : product_grid()) {
    Stopwatch sw;
    auto data = product_case_data(c);
    auto rep = closed ? verify_thm32(data, c.p, 15) : verify_thm31(data, c.p, 15);
    rep.param("delta", c.delta).param("d", c.d);
    long ms = sw.ms();
    slowest = std::max(slowest, ms);
    if (ms >= 60000) rep.fail("time", fmt_ms(ms));
    t.add(rep, o);
  }
  r.pass = t.pass();
  r.detail = t.summary() + "; slowest " + fmt_ms(slowest);
  return r;
}

inline CriterionResult c6(const AcceptanceOptions&) {
  CriterionResult r = named(6, "trace duality");
  auto B = plus_space_basis(20, 400);
  Tally t;
  double worst = 0;
  for (long delta : {5L, 8L, 13L})
    for (long d : small_indices())
      for (long n = 1; n <= 5; ++n) {
        TraceResult tr = trace_J(n, delta, d, 256);
        worst = std::max(worst, tr.residual);
        Int a = hecke_A(*B, n, delta, d);
        std::string at = "(" + std::to_string(delta) + "," + std::to_string(d) + "," + std::to_string(n) + ")";
        if (tr.residual >= 1e-10) t.fail(at + " residual");
        else if (tr.value_over_sqrt_delta != Rat(a)) t.fail(at + " " + to_string(tr.value_over_sqrt_delta) + "!=" + a.get_str());
        else t.ok();
      }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", worst);
  r.pass = t.pass();
  r.detail = t.summary() + "; max residual " + buf;
  return r;
}

inline CriterionResult a_table_criterion(int id, const char* name, const AcceptanceOptions& o, bool corollary) {
  CriterionResult r = named(id, name);
  Tally t;
  bool deep = false;
  for (long p : {2L, 3L})
    for (long m : {1L, 2L})
      for (long delta : {5L, 8L, 13L})
        for (long d : small_indices()) {
          if (delta % p == 0) continue;
          if (corollary && ord(d, p) >= 2) continue;
          t.add(corollary ? verify_cor42(delta, d, p, m, 6) : verify_thm41(delta, d, p, m, 6), o);
          if (m == 2 && p == 2) deep = true;  // n = 4 has min(ord_p(n), m) = 2
        }
  if (!corollary && !deep) t.fail("no instance with l = 2");
  r.pass = t.pass();
  r.detail = "n <= 6; " + t.summary();
  return r;
}

inline CriterionResult c9(const AcceptanceOptions& o) {
  CriterionResult r = named(9, "genus one M2(N)");
  Tally t;
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N, o.config_path);
    QSeries g0 = L.eisenstein_g0(3);
    if (g0.rational_coeff(Rat(0)) != 1 || g0.rational_coeff(Rat(1)) != 0) t.fail("g0 shape N=" + std::to_string(N));
    else t.ok();
    for (long p : {2L, 3L, 5L})
      if (N % p) t.add(verify_hecke_on_M2(L, p, 30), o);
  }
  r.pass = t.pass();
  r.detail = t.summary();
  return r;
}

inline CriterionResult c10(const AcceptanceOptions& o) {
  CriterionResult r = named(10, "level trace identity (1), exact");
  Tally t;
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N, o.config_path);
    for (auto [delta, d] : smallest_admissible_pairs(N))
      for (long p : {2L, 3L}) t.add(verify_thm44_item1(L, delta, d, p), o);
  }
  r.pass = t.pass();
  r.detail = "convention: full trace over Gamma0(N) classes, plus trace over W-orbits; " + t.summary();
  return r;
}

inline CriterionResult c11(const AcceptanceOptions& o) {
  CriterionResult r = named(11, "level trace identities (2)-(3), HEP, div3");
  Tally t;
  long slowest = 0;
  for (long N : {11L, 17L, 19L}) {
    Stopwatch sw;
    const auto& L = level(N, o.config_path);
    for (auto [delta, d] : smallest_admissible_pairs(N)) {
      for (long p : {2L, 3L}) {
        t.add(verify_thm44(L, delta, d, p, 6), o);
        t.add(verify_hep(L, delta, d, p, 6), o);
      }
      t.add(verify_div3(L, delta, d, 7), o);
    }
    long ms = sw.ms();
    slowest = std::max(slowest, ms);
    if (ms >= 300000) t.fail("N=" + std::to_string(N) + " took " + fmt_ms(ms));
  }
  r.pass = t.pass();
  r.detail = "n <= 6; " + t.summary() + "; slowest level " + fmt_ms(slowest);
  return r;
}

inline CriterionResult c12(const AcceptanceOptions& o) {
  CriterionResult r = named(12, "level congruences");
  Tally t;
  std::set<int> seen;
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N, o.config_path);
    for (auto [delta, d] : smallest_admissible_pairs(N))
      for (long p : {2L, 3L}) {
        t.add(verify_cor45(L, delta, d, p, 6), o);
        t.add(verify_cor46(L, delta, d, p), o);
        seen.insert(kronecker(-d, p));
      }
  }
  if (seen.size() != 3) t.fail("Kronecker cases seen: " + std::to_string(seen.size()) + " of 3");
  r.pass = t.pass();
  r.detail = t.summary() + "; Kronecker cases {-1,0,1} all covered";
  if (seen.size() != 3) r.detail = t.summary();
  return r;
}

// Property suites. Each returns an empty string on success.

inline std::string field_axioms() {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<long> coef(-20, 20), dens(1, 7);
  auto random_element = [&](long m) {
    std::vector<Int> v(euler_phi(m));
    for (auto& x : v) x = coef(rng);
    return CyclotomicNumber(m, v, dens(rng));
  };
  const long orders[] = {3, 5, 7, 8, 12, 15, 20};
  for (int it = 0; it < 40; ++it) {
    long m1 = orders[it % 7], m2 = orders[(it * 3 + 1) % 7];
    auto a = random_element(m1), b = random_element(m2), c = random_element(m1);
    if ((a + b) + c != a + (b + c) || (a * b) * c != a * (b * c) || a * b != b * a || a * (b + c) != a * b + a * c)
      return "field axiom at iteration " + std::to_string(it);
    if (!a.is_zero() && !(a * a.inv()).is_one()) return "inverse at iteration " + std::to_string(it);
  }
  for (long m = 1; m <= 30; ++m) {
    CyclotomicNumber s;
    for (long b = 0; b < m; ++b)
      if (std::gcd(b, m) == 1) s += root_of_unity(m, b);
    if (s.to_rational() != std::optional<Rat>(Rat(moebius(m)))) return "Moebius sum m=" + std::to_string(m);
  }
  return "";
}

inline std::string series_laws() {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<long> c(-5, 5), z(0, 3);
  auto random_series = [&](long T, long order) {
    QSeries s{Rat(T)};
    for (long e = -1; e < T; ++e) {
      if (z(rng) == 0) continue;
      std::vector<Int> v(euler_phi(order));
      for (auto& x : v) x = c(rng);
      s.set(Rat(e), CyclotomicNumber(order, v));
    }
    return s;
  };
  QSeries q2{Rat(12)};
  q2.set(Rat(2), CyclotomicNumber(1));
  for (int it = 0; it < 8; ++it) {
    QSeries f = random_series(12, 3), g = random_series(10, 4), h = random_series(11, 1);
    if (first_mismatch((f * g) * h, f * (g * h)) || first_mismatch(f * (g + h), f * g + f * h) ||
        first_mismatch(f * g, g * f))
      return "ring law at iteration " + std::to_string(it);
    if (first_mismatch((f * g).theta(), f.theta() * g + f * g.theta())) return "derivation law at iteration " + std::to_string(it);
    QSeries u = QSeries::one(12) + random_series(12, 5) * q2;
    if (first_mismatch(u.invert().invert(), u)) return "inverse at iteration " + std::to_string(it);
  }
  return "";
}

inline std::string galois_rationality(std::string& note) {
  std::string bad;
  bool equivariant = true;
  for (long delta : {5L, 8L, 13L}) {
    auto data = basis_data(delta, delta == 8 ? 4 : 3, 12);
    QSeries psi = expand_psi(data, 12);
    QSeries inv = psi.invert();
    for (long a = 2; a < delta; ++a) {
      if (std::gcd(a, delta) != 1) continue;
      QSeries s = psi.map_coefficients([&](const CyclotomicNumber& x) { return x.galois(a); });
      const QSeries& expect = delta_character(delta, a) == 1 ? psi : inv;
      if (first_mismatch(s, expect.truncated(s.trunc()))) equivariant = false;
    }
    try {
      psi.rationalize();
    } catch (const NonRationalCoefficient&) {
      bad += (bad.empty() ? "" : ",") + std::to_string(delta);
    }
  }
  note = equivariant ? "sigma_a(Psi) = Psi^chi(a) holds" : "sigma_a(Psi) = Psi^chi(a) fails";
  if (!equivariant) return note;
  return bad.empty() ? "" : "irrational coefficients for Delta in {" + bad + "}";
}

inline std::string sh_vs_recursion() {
  QSeries j = j_series(400);
  QSeries f = j - CyclotomicNumber(744) * QSeries::one(400);
  for (long k : {0L, 2L, 4L})
    for (long p : {2L, 3L})
      for (long m = 1; m <= 3; ++m) {
        QSeries rec = hecke_integral_power(f.truncated(Rat(ipow(p, m) * 8)), k, p, m);
        for (long n = 1; n < 8 && Rat(n) < rec.trunc(); ++n)
          if (rec.coeff(n) != hecke_power_coefficient(f, k, p, m, n))
            return "k=" + std::to_string(k) + " p=" + std::to_string(p) + " m=" + std::to_string(m) + " n=" + std::to_string(n);
      }
  return "";
}

inline std::string basis_shape(const AcceptanceOptions& o) {
  const long T = 20;
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N, o.config_path);
    std::string at = "N=" + std::to_string(N);
    for (long m = 1; m <= 10; ++m) {
      QSeries f = L.plus_basis(m, T);
      if (f.rational_coeff(Rat(-m)) != 1) return at + " plus leading m=" + std::to_string(m);
      for (long e = -m + 1; e <= 0; ++e)
        if (f.rational_coeff(Rat(e)) != 0) return at + " plus shape m=" + std::to_string(m);
      for (long e = -m; e < T; ++e)
        if (f.rational_coeff(Rat(e)).get_den() != 1) return at + " plus integrality m=" + std::to_string(m);
    }
    for (long m = 2; m <= 10; ++m) {
      QSeries fm = L.minus_basis(m, T), fs = L.sharp_basis(m, T);
      for (const QSeries* g : {&fm, &fs}) {
        if (g->rational_coeff(Rat(-m)) != 1) return at + " leading m=" + std::to_string(m);
        for (long e = -m + 1; e <= -2; ++e)
          if (g->rational_coeff(Rat(e)) != 0) return at + " shape m=" + std::to_string(m);
        for (long e = -m; e < T; ++e)
          if (g->rational_coeff(Rat(e)).get_den() != 1) return at + " integrality m=" + std::to_string(m);
      }
      if (fs.rational_coeff(Rat(0)) != 0) return at + " sharp constant m=" + std::to_string(m);
    }
  }
  return "";
}

inline std::string r1(const AcceptanceOptions& o) {
  const long T = 20;
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N, o.config_path);
    for (long m = 2; m <= 10; ++m) {
      auto [am1, a0] = L.aminus(m);
      QSeries lhs = CyclotomicNumber(2) * L.sharp_basis(m, T);
      QSeries rhs = L.plus_basis(m, T) + L.minus_basis(m, T) + CyclotomicNumber(am1) * L.plus_basis(1, T) -
                    CyclotomicNumber(a0) * QSeries::one(T);
      if (first_mismatch(lhs, rhs)) return "N=" + std::to_string(N) + " m=" + std::to_string(m);
    }
  }
  return "";
}

inline std::string fricke_odd(const AcceptanceOptions& o, double& worst) {
  const mpfr_prec_t pr = 200;
  const std::vector<std::pair<Rat, Rat>> pts = {{Rat(1, 10), Rat(3, 10)}, {Rat(-1, 5), Rat(7, 20)}, {Rat(0), Rat(1, 3)}};
  worst = 0;
  std::string bad;
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N, o.config_path);
    for (long m : {2L, 3L, 5L}) {
      ZSeries f = L.minus_basis_z(m, 700);
      for (const auto& [re, im] : pts) {
        Complex z(Real(re, pr), Real(im, pr));
        Complex wz = -(Complex(Real(1L, pr), Real(pr)) / (z * Real(N, pr)));
        double res = (evaluate_series(f, z, pr) + evaluate_series(f, wz, pr)).abs().to_double();
        worst = std::max(worst, res);
        if (res >= 1e-30 && bad.empty()) bad = "N=" + std::to_string(N) + " m=" + std::to_string(m);
      }
    }
  }
  return bad;
}

inline CriterionResult c13(const AcceptanceOptions& o) {
  CriterionResult r = named(13, "property suites");
  std::vector<std::pair<std::string, std::string>> parts;
  std::string note;
  double worst = 0;
  parts.emplace_back("cyclotomic", field_axioms());
  parts.emplace_back("qseries", series_laws());
  parts.emplace_back("galois-rationality", galois_rationality(note));
  parts.emplace_back("sh-recursion", sh_vs_recursion());
  parts.emplace_back("basis-shape", basis_shape(o));
  parts.emplace_back("r1", r1(o));
  parts.emplace_back("fricke-odd", fricke_odd(o, worst));
  r.pass = true;
  for (const auto& [name, why] : parts) {
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += name + (why.empty() ? " ok" : " FAIL (" + why + ")");
    if (!why.empty()) r.pass = false;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", worst);
  r.detail += "; " + note + "; Fricke residual " + buf;
  return r;
}

}  // namespace acceptance

/// Runs the criteria whose ids are listed (all when empty), in order.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o, const std::set<int>& only = {}) {
  using namespace acceptance;
  const std::vector<std::function<CriterionResult(const AcceptanceOptions&)>> all = {
      c1,
      c2,
      c3,
      [](const AcceptanceOptions& x) { return product_criterion(4, "multiplicative Hecke on products", x, false); },
      [](const AcceptanceOptions& x) { return product_criterion(5, "Hecke on closed log-derivatives", x, true); },
      c6,
      [](const AcceptanceOptions& x) { return a_table_criterion(7, "Hecke action on traces", x, false); },
      [](const AcceptanceOptions& x) { return a_table_criterion(8, "trace congruence identity", x, true); },
      c9,
      c10,
      c11,
      c12,
      c13};
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < all.size(); ++i) {
    int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Stopwatch sw;
    CriterionResult r;
    try {
      r = all[i](o);
    } catch (const std::exception& e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.pass = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.ms = sw.ms();
    if (o.on_criterion) o.on_criterion(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hlift
