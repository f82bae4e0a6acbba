#include <gtest/gtest.h>

#include <cstdio>

#include "hlift/genus1.hpp"

using namespace hlift;

namespace {

const Genus1Level& level(long N) {
  static std::map<long, std::unique_ptr<Genus1Level>> cache;
  auto& p = cache[N];
  if (!p) p = std::make_unique<Genus1Level>(N, read_curve_config(default_config_path()).at(N));
  return *p;
}

// j-invariant of y^2 + b1 xy + b3 y = x^3 + b2 x^2 + b4 x + b6
Rat j_of(const Rat& a1, const Rat& a2, const Rat& a3, const Rat& a4, const Rat& a6) {
  Rat b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
  Rat b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  Rat c4 = b2 * b2 - 24 * b4;
  Rat disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  Rat j = c4 * c4 * c4 / disc;
  j.canonicalize();
  return j;
}

Complex at(const ZSeries& f, const Complex& z, mpfr_prec_t prec) { return evaluate_series(f, z, prec); }

}  // namespace

TEST(Genus1, CuspFormFromPointCounts) {
  const auto& L = level(11);
  EXPECT_EQ(L.alpha(1), 1);
  EXPECT_EQ(L.alpha(2), -2);
  EXPECT_EQ(L.alpha(11), 1);
  for (long N : {11L, 17L, 19L}) {
    const auto& M = level(N);
    for (long p : {2L, 3L, 5L, 7L}) {
      if (N % p == 0) continue;
      EXPECT_EQ(M.alpha(p * p), M.alpha(p) * M.alpha(p) - p);
      EXPECT_EQ(M.alpha(p * 13), M.alpha(p) * M.alpha(13));
    }
    EXPECT_NO_THROW(M.validate(80));
  }
  // eta(tau)^2 eta(11 tau)^2
  ZSeries eta = eta_product_z(EtaQuotient{{{1, 2}, {11, 2}}}, 40).shifted(1);
  ZSeries g = L.cusp_form(40);
  for (long n = 0; n < 40; ++n) EXPECT_EQ(g.at(n), eta.at(n)) << n;
}

TEST(Genus1, EisensteinCombination) {
  for (long N : {11L, 17L, 19L}) {
    QSeries g0 = level(N).eisenstein_g0(10);
    EXPECT_EQ(g0.rational_coeff(Rat(0)), Rat(1));
    EXPECT_EQ(g0.rational_coeff(Rat(1)), Rat(0));
  }
  // (-24 sigma(2))/(1 - 11) + 24/(1 - 11) alpha_2
  EXPECT_EQ(level(11).eisenstein_g0(10).rational_coeff(Rat(2)), Rat(12));
}

TEST(Genus1, M2HeckeIdentities) {
  for (long N : {11L, 17L, 19L})
    for (long p : {2L, 3L, 5L}) {
      auto rep = verify_hecke_on_M2(level(N), p, 30);
      EXPECT_TRUE(rep.pass) << N << " " << p << " " << rep.to_json().dump();
    }
  EXPECT_THROW(verify_hecke_on_M2(level(11), 11, 10), InvalidPrime);
}

TEST(Genus1, HauptmodulShapeAndValues) {
  const std::vector<std::pair<long, std::vector<long>>> known = {
      {11, {17, 46, 116, 252, 533, 1034}}, {17, {7, 14, 29, 50, 92, 148}}, {19, {6, 10, 21, 36, 61, 96}}};
  for (const auto& [N, c] : known) {
    ZSeries t = level(N).hauptmodul(40);
    EXPECT_EQ(t.val(), -1);
    EXPECT_EQ(t.at(-1), 1);
    EXPECT_EQ(t.at(0), 0);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(t.at(static_cast<long>(i) + 1), c[i]) << N;
  }
  // Fricke invariance at tau = 0.1 + 0.4i
  const mpfr_prec_t pr = 200;
  for (long N : {11L, 17L, 19L}) {
    Complex z(Real(Rat(1, 10), pr), Real(Rat(2, 5), pr));
    Complex wz = -(Complex(Real(1L, pr), Real(pr)) / (z * Real(N, pr)));
    ZSeries t = level(N).hauptmodul(400);
    EXPECT_LT((at(t, z, pr) - at(t, wz, pr)).abs().to_double(), 1e-30) << N;
  }
}

TEST(Genus1, PlusBasis) {
  const auto& L = level(11);
  EXPECT_EQ(L.plus_polynomial(0), (std::vector<Int>{Int(1)}));
  EXPECT_EQ(L.plus_polynomial(1), (std::vector<Int>{Int(0), Int(1)}));
  EXPECT_EQ(L.plus_polynomial(2), (std::vector<Int>{Int(-34), Int(0), Int(1)}));
  for (long N : {11L, 17L, 19L})
    for (long m = 1; m <= 10; ++m) {
      ZSeries f = level(N).plus_basis_z(m, 20);
      EXPECT_EQ(f.at(-m), 1);
      for (long e = -m + 1; e <= 0; ++e) EXPECT_EQ(f.at(e), 0) << N << " " << m << " " << e;
    }
}

TEST(Genus1, MinusAndSharpBases) {
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N);
    for (long m = 2; m <= 10; ++m) {
      ZSeries fm = L.minus_basis_z(m, 20), fs = L.sharp_basis_z(m, 20);
      EXPECT_EQ(fm.at(-m), 1);
      for (long e = -m + 1; e <= -2; ++e) EXPECT_EQ(fm.at(e), 0);
      EXPECT_EQ(fs.at(-m), 1);
      for (long e = -m + 1; e <= -2; ++e) EXPECT_EQ(fs.at(e), 0);
      EXPECT_EQ(fs.at(0), 0);
      auto [am1, a0] = L.aminus(m);
      EXPECT_EQ(fs.at(-1), am1);
      // (R1) coefficientwise
      ZSeries two = Int(2) * fs;
      ZSeries rhs = L.plus_basis_z(m, 20) + fm + am1 * L.plus_basis_z(1, 20);
      rhs = rhs.rebased(-m);
      rhs.ref(0) -= a0;
      for (long e = -m; e < 20; ++e) EXPECT_EQ(two.at(e), rhs.at(e)) << N << " " << m << " " << e;
    }
    EXPECT_EQ(L.sharp_basis_z(0, 5).at(0), 1);
    EXPECT_TRUE(L.sharp_basis_z(1, 5) == ZSeries::zero(0, 5));
    EXPECT_THROW(L.minus_basis_z(1, 5), DomainError);
  }
}

TEST(Genus1, SharpGeneratorsSatisfyTheCurve) {
  // y^2 - x^3 peeled by xy, x^2, y, x, 1 must vanish; its j-invariant is the curve's
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N);
    const long T = 30;
    ZSeries x = L.sharp_basis_z(2, T + 8), y = L.sharp_basis_z(3, T + 8);
    ZSeries F = (y * y - x * x * x).truncated(T);
    std::vector<ZSeries> mons = {(x * y).truncated(T), (x * x).truncated(T), y.truncated(T), x.truncated(T),
                                 ZSeries(0, std::vector<Int>(T, Int(0)))};
    mons[4].ref(0) = 1;
    std::vector<Int> c(5);
    for (int k = 0; k < 5; ++k) {
      long e = k == 4 ? 0 : -5 + k;
      c[k] = F.at(e);
      F -= c[k] * mons[k].rebased(F.val()).truncated(F.trunc());
    }
    for (long n = F.val(); n < F.trunc(); ++n) EXPECT_EQ(F.at(n), 0) << N << " " << n;
    // y^2 = x^3 + c0 xy + c1 x^2 + c2 y + c3 x + c4
    Rat j = j_of(Rat(-c[0]), Rat(c[1]), Rat(-c[2]), Rat(c[3]), Rat(c[4]));
    EXPECT_EQ(j, L.curve().j_invariant()) << N;
  }
}

TEST(Genus1, MinusSpaceIsFrickeOdd) {
  const mpfr_prec_t pr = 200;
  const std::vector<std::pair<Rat, Rat>> pts = {{Rat(1, 10), Rat(3, 10)}, {Rat(-1, 5), Rat(7, 20)}, {Rat(0), Rat(1, 3)}};
  for (long N : {11L, 17L, 19L}) {
    const auto& L = level(N);
    for (long m : {2L, 3L, 5L}) {
      ZSeries f = L.minus_basis_z(m, 700);
      for (const auto& [re, im] : pts) {
        Complex z(Real(re, pr), Real(im, pr));
        Complex wz = -(Complex(Real(1L, pr), Real(pr)) / (z * Real(N, pr)));
        EXPECT_LT((at(f, z, pr) + at(f, wz, pr)).abs().to_double(), 1e-30) << N << " " << m;
      }
    }
  }
}

TEST(Genus1, PlusReduction) {
  for (long N : {11L, 17L, 19L})
    for (long D : {-35L, -95L, -140L}) {
      for (const auto& c : enumerate_classes(D, N)) {
        PlusReduced r = reduce_plus(c.form, N);
        EXPECT_LE(r.form.a, c.form.a);
        EXPECT_EQ(r.form.disc(), D);
        ClassKey k = class_key(r.form, N), kw = class_key(fricke(r.form, N), N);
        if (r.wsign > 0)
          EXPECT_EQ(k, c.key);
        else
          EXPECT_EQ(kw, c.key);
        EXPECT_EQ(reduce_plus(r.form, N).form.a, r.form.a);
      }
    }
}

TEST(Genus1, LevelValueMatchesSeries) {
  const auto& L = level(11);
  const mpfr_prec_t pr = 128;
  for (const auto& c : enumerate_classes(-35, 11)) {
    CMPoint z = cm_point(c.form);
    ZSeries f = L.sharp_basis_z(3, 3000);
    Complex direct = at(f, z.value(pr + 200), pr + 200);
    Complex v = level_value(L, LevelFunction::sharp, 3, c.form, pr);
    EXPECT_LT((direct - v).abs().to_double(), 1e-20) << c.form.str();
  }
}

TEST(Genus1, AdmissiblePairs) {
  EXPECT_EQ(smallest_admissible_pairs(11), (std::vector<std::pair<long, long>>{{5, 7}, {5, 8}, {5, 11}}));
  EXPECT_TRUE(admissible_pair(11, 5, 7));
  EXPECT_FALSE(admissible_pair(11, 8, 7));
  EXPECT_FALSE(admissible_pair(11, 5, 3));
}

TEST(Genus1, TracesAreIntegralAndR2Holds) {
  for (long N : {11L, 17L, 19L}) {
    auto [delta, d] = smallest_admissible_pairs(N)[0];
    LevelTraces tr(level(N), delta);
    for (long m = 0; m <= 8; ++m) {
      EXPECT_EQ(tr.sharp(m, d).value_over_sqrt_delta.get_den(), 1);
      EXPECT_EQ(tr.plus(m, d).value_over_sqrt_delta.get_den(), 1);
    }
    EXPECT_LT(tr.max_residual(), 1e-30);
    for (long m : {1L, 2L, 3L, 6L}) EXPECT_TRUE(verify_r2(level(N), delta, d, m).pass) << N << " " << m;
    EXPECT_EQ(class_number(delta, d, N), Rat(0));
  }
}

TEST(Genus1, TraceIdentities) {
  for (long N : {11L, 17L, 19L}) {
    auto [delta, d] = smallest_admissible_pairs(N)[0];
    const auto& L = level(N);
    EXPECT_TRUE(verify_thm44(L, delta, d, 2, 4).pass) << N;
    EXPECT_TRUE(verify_hep(L, delta, d, 3, 4).pass) << N;
    EXPECT_TRUE(verify_div3(L, delta, d, 8).pass) << N;
    EXPECT_TRUE(verify_cor45(L, delta, d, 2, 4).pass) << N;
    EXPECT_TRUE(verify_cor46(L, delta, d, 3).pass) << N;
  }
  EXPECT_THROW(verify_thm44(level(11), 5, 7, 5, 3), InvalidPrime);
  EXPECT_THROW(verify_thm44(level(11), 5, 3, 2, 3), DomainError);
}

TEST(Genus1, Configuration) {
  EXPECT_THROW(read_curve_config("/nonexistent/curves.conf"), ConfigError);
  char path[] = "/tmp/hlift_cfg_XXXXXX";
  int fd = mkstemp(path);
  ASSERT_GE(fd, 0);
  FILE* f = fdopen(fd, "w");
  std::fputs("# comment\ncurve.11 = 0 -1 1 -10 -20\ncurve.17 = 1 -1 1\n", f);
  std::fclose(f);
  EXPECT_THROW(read_curve_config(path), ConfigError);
  f = std::fopen(path, "w");
  std::fputs("curve.11 = 1 -1 1 -1 -14\n", f);
  std::fclose(f);
  auto bad = read_curve_config(path);
  std::remove(path);
  Genus1Level wrong(11, bad.at(11));
  EXPECT_THROW(wrong.validate(40), ConfigError);
  EXPECT_THROW(Genus1Level(13, bad.at(11)), DomainError);
}
