#include <gtest/gtest.h>

#include <random>

#include "hlift/cyclo.hpp"

using namespace hlift;

namespace {

// Phi_m from the Moebius product prod_{d|m} (x^d - 1)^{mu(m/d)}.
IntPoly moebius_cyclotomic(long m) {
  std::vector<long> num{1}, den{1};
  auto mul = [](const std::vector<long>& a, long d) {
    std::vector<long> r(a.size() + d, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      r[i + d] += a[i];
      r[i] -= a[i];
    }
    return r;
  };
  for (long d : divisors(m)) {
    int mu = moebius(m / d);
    if (mu == 1) num = mul(num, d);
    if (mu == -1) den = mul(den, d);
  }
  // exact division num / den
  std::vector<long> q(num.size() - den.size() + 1, 0);
  for (long i = static_cast<long>(num.size()) - 1; i >= static_cast<long>(den.size()) - 1; --i) {
    long c = num[i] / den.back();
    q[i - den.size() + 1] = c;
    for (std::size_t j = 0; j < den.size(); ++j) num[i - den.size() + 1 + j] -= c * den[j];
  }
  return q;
}

CyclotomicNumber random_element(std::mt19937& rng, long m) {
  std::uniform_int_distribution<long> coef(-20, 20), dens(1, 7);
  std::vector<Int> v(euler_phi(m));
  for (auto& x : v) x = coef(rng);
  return CyclotomicNumber(m, v, dens(rng));
}

}  // namespace

TEST(Cyclo, PolynomialSmallCases) {
  EXPECT_EQ(cyclotomic_polynomial(1), (IntPoly{-1, 1}));
  EXPECT_EQ(cyclotomic_polynomial(4), (IntPoly{1, 0, 1}));
  EXPECT_EQ(cyclotomic_polynomial(6), (IntPoly{1, -1, 1}));
}

TEST(Cyclo, PolynomialMatchesMoebiusProduct) {
  for (long m = 1; m <= 60; ++m) {
    EXPECT_EQ(cyclotomic_polynomial(m), moebius_cyclotomic(m)) << m;
    EXPECT_EQ(static_cast<long>(cyclotomic_polynomial(m).size()) - 1, euler_phi(m));
  }
}

TEST(Cyclo, RootsOfUnity) {
  EXPECT_TRUE(root_of_unity(1, 0).is_one());
  EXPECT_EQ(root_of_unity(4, 2).to_rational(), std::optional<Rat>(Rat(-1)));
  EXPECT_EQ(root_of_unity(5, 7), root_of_unity(5, 2));
  EXPECT_FALSE(root_of_unity(5, 1).to_rational().has_value());
}

TEST(Cyclo, FieldExamples) {
  EXPECT_EQ(root_of_unity(5, 1).inv(), root_of_unity(5, 4));
  CyclotomicNumber a = CyclotomicNumber(1) + root_of_unity(3, 1);
  CyclotomicNumber b = CyclotomicNumber(1) + root_of_unity(3, 2);
  EXPECT_TRUE((a * b).is_one());
  CyclotomicNumber c = CyclotomicNumber(2) - CyclotomicNumber(3) * root_of_unity(8, 1);
  EXPECT_TRUE((c * c.inv()).is_one());
  EXPECT_THROW(CyclotomicNumber().inv(), DomainError);
}

TEST(Cyclo, MixedOrdersLiftToLcm) {
  CyclotomicNumber s = root_of_unity(4, 1) * root_of_unity(6, 1);
  EXPECT_EQ(s, root_of_unity(12, 5));
  EXPECT_EQ(s.order(), 12);
  CyclotomicNumber i = root_of_unity(4, 1);
  EXPECT_EQ(i.lift(12), root_of_unity(12, 3));
}

TEST(Cyclo, RandomFieldAxioms) {
  std::mt19937 rng(12345);
  const long orders[] = {3, 5, 7, 8, 12, 15, 20};
  for (int it = 0; it < 40; ++it) {
    long m1 = orders[it % 7], m2 = orders[(it * 3 + 1) % 7];
    CyclotomicNumber a = random_element(rng, m1), b = random_element(rng, m2), c = random_element(rng, m1);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!a.is_zero()) EXPECT_TRUE((a * a.inv()).is_one());
  }
}

TEST(Cyclo, MoebiusSums) {
  for (long m = 1; m <= 30; ++m) {
    CyclotomicNumber s;
    for (long b = 0; b < m; ++b)
      if (std::gcd(b, m) == 1) s += root_of_unity(m, b);
    auto r = s.to_rational();
    ASSERT_TRUE(r.has_value()) << m;
    EXPECT_EQ(*r, Rat(moebius(m))) << m;
  }
}

TEST(Cyclo, GaloisTraceIsRational) {
  std::mt19937 rng(7);
  for (long m : {5L, 8L, 12L, 13L}) {
    CyclotomicNumber a = random_element(rng, m), s;
    for (long k = 1; k < m; ++k)
      if (std::gcd(k, m) == 1) s += a.galois(k);
    EXPECT_TRUE(s.to_rational().has_value()) << m;
  }
}

TEST(Cyclo, EmbedSixthRoot) {
  Complex z = root_of_unity(6, 1).embed(64);
  EXPECT_NEAR(z.re.to_double(), 0.5, 1e-18);
  EXPECT_NEAR(z.im.to_double(), 0.8660254037844386, 1e-15);
  EXPECT_THROW(root_of_unity(6, 1).embed(16), DomainError);
}

TEST(Cyclo, EmbedIsMultiplicative) {
  std::mt19937 rng(99);
  for (int it = 0; it < 10; ++it) {
    CyclotomicNumber a = random_element(rng, 7), b = random_element(rng, 9);
    Complex lhs = (a * b).embed(128);
    Complex rhs = a.embed(128) * b.embed(128);
    Complex d = lhs - rhs;
    double bound = std::ldexp(1.0, 4 - 128) * (1 + a.embed(64).abs().to_double() * b.embed(64).abs().to_double());
    EXPECT_LT(d.abs().to_double(), bound);
  }
}
