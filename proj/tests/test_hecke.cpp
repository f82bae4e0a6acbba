#include <gtest/gtest.h>

#include "hlift/hecke.hpp"

using namespace hlift;

TEST(Hecke, DeltaIsEigenform) {
  QSeries d = delta_series(200);
  for (long p : {2L, 3L, 5L}) {
    QSeries img = hecke_integral(d, 12, p);
    CyclotomicNumber tau_p = d.coeff(p);
    EXPECT_FALSE(first_mismatch(img, tau_p * d.truncated(img.trunc()))) << p;
  }
  EXPECT_EQ(d.coeff(2), CyclotomicNumber(-24));
}

TEST(Hecke, WeightZeroSendsJToFaber) {
  // (j - 744) | T_0(p) * p = J_p, i.e. p T_0(p) J_1 = J_p with the 1/p normalization folded in
  const long T = 30;
  for (long p : {2L, 3L}) {
    ZSeries J1 = faber_J_z(1, p * T);
    // coefficient: c(pn) + p^{-1} c(n/p); scaled by p
    ZSeries Jp = faber_J_z(p, T);
    for (long n = 1; n < T; ++n) {
      Int v = Int(p) * J1.at(p * n);
      if (n % p == 0) v += J1.at(n / p);
      EXPECT_EQ(v, Jp.at(n)) << p << " " << n;
    }
  }
}

TEST(Hecke, ClosedFormulaMatchesRecursion) {
  QSeries j = j_series(400);
  QSeries f = j - CyclotomicNumber(744) * QSeries::one(400);
  for (long k : {0L, 2L, 4L}) {
    for (long p : {2L, 3L}) {
      for (long m = 1; m <= 3; ++m) {
        QSeries rec = hecke_integral_power(f.truncated(Rat(ipow(p, m) * 8)), k, p, m);
        for (long n = 1; n < 8; ++n) {
          if (Rat(n) >= rec.trunc()) break;
          EXPECT_EQ(rec.coeff(n), hecke_power_coefficient(f, k, p, m, n)) << k << " " << p << " " << m << " " << n;
        }
      }
    }
  }
}

TEST(Hecke, TruncationAndErrors) {
  QSeries d = delta_series(20);
  EXPECT_EQ(hecke_integral(d, 12, 3).trunc(), Rat(20, 3));
  EXPECT_THROW(hecke_integral(d, 12, 4), InvalidPrime);
}

TEST(Hecke, HalfIntegralOnTheta) {
  // theta at level one in Kohnen form is an eigenform with eigenvalue p + 1
  VectorValuedCoefficients v;
  v.level = 1;
  v.trunc = 400;
  for (long n = 0; n * n < 400; ++n) v.set(n * n, n, Rat(n == 0 ? 1 : 2));
  EXPECT_TRUE(v.check_invariants());
  for (long p : {2L, 3L, 5L}) {
    VectorValuedCoefficients w = hecke_half(v, p);
    EXPECT_EQ(w, Rat(p + 1) * v) << p;
    EXPECT_EQ(w.trunc, (400 + p * p - 1) / (p * p));
  }
  VectorValuedCoefficients w2 = hecke_half_power(v, 3, 2);
  EXPECT_EQ(w2, Rat(13) * v);
}

TEST(Hecke, FamilyAccessBeyondTruncationThrows) {
  VectorValuedCoefficients v;
  v.trunc = 10;
  EXPECT_THROW(v.get(10, 0), DomainError);
}

TEST(Hecke, MultiplicativeOnEtaProduct) {
  // T(p) of Delta: Delta(p tau) prod_j Delta((tau + j)/p) normalized = Delta^{p+1}
  const long T = 12;
  for (long p : {2L, 3L}) {
    QSeries d = delta_series(p * (T + p + 1) + 2);
    QSeries img = mult_hecke(d, 12, 1, p);
    QSeries expect = delta_series(T + p + 2).pow(p + 1);
    Rat U = std::min(img.trunc(), expect.trunc());
    EXPECT_FALSE(first_mismatch(img.truncated(U), expect.truncated(U))) << p;
  }
  EXPECT_THROW(mult_hecke(delta_series(10), 12, 11, 11), InvalidPrime);
}
