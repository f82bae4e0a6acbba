#include <gtest/gtest.h>

#include <random>

#include "hlift/zseries.hpp"

using namespace hlift;

namespace {

QSeries poly(std::initializer_list<std::pair<long, long>> terms, long T) {
  QSeries s{Rat(T)};
  for (auto [e, c] : terms) s.set(Rat(e), CyclotomicNumber(c));
  return s;
}

QSeries random_series(std::mt19937& rng, long T, long order) {
  std::uniform_int_distribution<long> c(-5, 5), z(0, 3);
  QSeries s{Rat(T)};
  for (long e = -1; e < T; ++e) {
    if (z(rng) == 0) continue;
    std::vector<Int> v(euler_phi(order));
    for (auto& x : v) x = c(rng);
    s.set(Rat(e), CyclotomicNumber(order, v));
  }
  return s;
}

}  // namespace

TEST(QSeries, RingExamples) {
  QSeries a = poly({{0, 1}, {1, 1}}, 10), b = poly({{0, 1}, {1, -1}}, 10);
  EXPECT_FALSE(first_mismatch(a * b, poly({{0, 1}, {2, -1}}, 10)));
  QSeries qi = poly({{-1, 1}}, 10), q = poly({{1, 1}}, 10);
  EXPECT_FALSE(first_mismatch(qi * q, QSeries::one(9)));
  EXPECT_FALSE(first_mismatch(b.pow(3), poly({{0, 1}, {1, -3}, {2, 3}, {3, -1}}, 10)));
}

TEST(QSeries, TruncationRule) {
  QSeries f = poly({{-1, 1}, {0, 3}}, 5), g = poly({{2, 1}}, 7);
  QSeries h = f * g;
  EXPECT_EQ(h.trunc(), Rat(6));  // min(5 + 2, 7 - 1)
  EXPECT_EQ((f + g).trunc(), Rat(5));
}

TEST(QSeries, InvertExamples) {
  QSeries f = poly({{0, 1}, {1, -1}}, 12);
  QSeries inv = f.invert();
  for (long e = 0; e < 12; ++e) EXPECT_EQ(inv.coeff(e), CyclotomicNumber(1));
  QSeries g = poly({{-1, 1}, {0, 1}}, 12);
  QSeries gi = g.invert();
  EXPECT_EQ(gi.valuation(), Rat(1));
  for (long e = 1; e < 14; ++e) EXPECT_EQ(gi.coeff(e), CyclotomicNumber((e % 2) ? 1 : -1));
  EXPECT_FALSE(first_mismatch(g * gi, QSeries::one(100)));
  EXPECT_THROW(QSeries::zero(5).invert(), DomainError);
}

TEST(QSeries, RandomRingLaws) {
  std::mt19937 rng(2024);
  for (int it = 0; it < 8; ++it) {
    QSeries f = random_series(rng, 12, 3), g = random_series(rng, 10, 4), h = random_series(rng, 11, 1);
    EXPECT_FALSE(first_mismatch((f * g) * h, f * (g * h)));
    EXPECT_FALSE(first_mismatch(f * (g + h), f * g + f * h));
    EXPECT_FALSE(first_mismatch(f * g, g * f));
    // derivation law
    EXPECT_FALSE(first_mismatch((f * g).theta(), f.theta() * g + f * g.theta()));
    QSeries u = QSeries::one(12) + random_series(rng, 12, 5) * poly({{2, 1}}, 12);
    EXPECT_FALSE(first_mismatch(u.invert().invert(), u));
  }
}

TEST(QSeries, Theta) {
  QSeries f = poly({{3, 2}, {0, 5}}, 9);
  EXPECT_EQ(f.theta().coeff(3), CyclotomicNumber(6));
  EXPECT_TRUE(f.theta().coeff(0).is_zero());
}

TEST(QSeries, SubstituteUp) {
  QSeries f = poly({{0, 1}, {1, 1}}, 5);
  QSeries g = f.substitute_up(3);
  EXPECT_FALSE(first_mismatch(g, poly({{0, 1}, {3, 1}}, 15)));
  EXPECT_EQ(g.trunc(), Rat(15));
  EXPECT_EQ(poly({{-1, 1}}, 3).substitute_up(2).valuation(), Rat(-2));
  EXPECT_FALSE(first_mismatch(f.substitute_up(2).substitute_up(3), f.substitute_up(6)));
}

TEST(QSeries, SlashShift) {
  QSeries q = poly({{1, 1}}, 5);
  QSeries s = q.slash_shift(2, 1);
  EXPECT_EQ(s.coeff(Rat(1, 2)), CyclotomicNumber(-1));
  QSeries q2 = poly({{2, 1}}, 5);
  EXPECT_EQ(q2.slash_shift(2, 1).coeff(Rat(1)), CyclotomicNumber(1));
  QSeries f = poly({{0, 1}, {1, -1}}, 9);
  QSeries prod = QSeries::one(9);
  for (long j = 0; j < 3; ++j) prod = prod * f.slash_shift(3, j);
  prod = prod.normalized();
  EXPECT_TRUE(prod.integral_exponents());
  EXPECT_FALSE(first_mismatch(prod, f.truncated(prod.trunc())));
}

TEST(QSeries, SlashProductHasIntegralExponents) {
  std::mt19937 rng(5);
  for (long p : {2L, 3L, 5L}) {
    QSeries f = random_series(rng, 8, 1);
    QSeries prod = QSeries::one(100);
    for (long j = 0; j < p; ++j) prod = prod * f.slash_shift(p, j);
    EXPECT_TRUE(prod.normalized().integral_exponents()) << p;
  }
}

TEST(QSeries, Rationalize) {
  QSeries f{Rat(5)};
  f.set(Rat(0), CyclotomicNumber(1));
  f.set(Rat(1), root_of_unity(3, 1) + root_of_unity(3, 2));
  QSeries r = f.rationalize();
  EXPECT_EQ(r.coeff(1), CyclotomicNumber(-1));
  QSeries g{Rat(5)};
  g.set(Rat(0), CyclotomicNumber(1));
  g.set(Rat(1), root_of_unity(5, 1));
  try {
    g.rationalize();
    FAIL();
  } catch (const NonRationalCoefficient& e) {
    EXPECT_EQ(e.exponent, Rat(1));
  }
}

TEST(QSeries, JsonRoundTrip) {
  QSeries f{Rat(7, 2), 2};
  f.set(Rat(-1, 2), root_of_unity(5, 2));
  f.set(Rat(3), CyclotomicNumber(Rat(-3, 4)));
  auto j = f.to_json();
  EXPECT_EQ(j["ram_index"], 2);
  EXPECT_EQ(j["trunc"], "7/2");
  EXPECT_EQ(j["terms"][0]["exp"], "-1/2");
  QSeries g = QSeries::from_json(j);
  EXPECT_FALSE(first_mismatch(f, g));
  EXPECT_EQ(g.trunc(), f.trunc());
}

TEST(ZSeries, KroneckerMatchesSchoolbook) {
  std::mt19937_64 rng(77);
  for (int it = 0; it < 6; ++it) {
    std::size_t na = 50 + it * 37, nb = 40 + it * 23;
    std::vector<Int> a(na), b(nb);
    for (auto& x : a) {
      x = Int(static_cast<long>(rng() % 2000001) - 1000000) * Int(static_cast<long>(rng() % 1000)) * Int(1L << 40);
    }
    for (auto& x : b) x = Int(static_cast<long>(rng() % 20001) - 10000);
    std::size_t len = na + nb - 1;
    auto fast = poly_mul(a, b, len);
    std::vector<Int> slow(len, Int(0));
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) slow[i + j] += a[i] * b[j];
    EXPECT_EQ(fast, slow);
  }
}

TEST(ZSeries, SparseDivisionInvertsMultiplication) {
  ZSeries f = ZSeries::zero(-2, 40);
  for (long e = -2; e < 40; ++e) f.ref(e) = e * e - 7;
  SparseTerms s{{0, 1}, {1, -3}, {4, 2}};
  EXPECT_EQ(f.mul_sparse(s).div_sparse(s), f);
}
