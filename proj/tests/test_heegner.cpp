#include <gtest/gtest.h>

#include <random>

#include "hlift/heegner.hpp"
#include "hlift/zagier.hpp"

using namespace hlift;

namespace {

// Hurwitz class number by brute force over all forms with |b| <= a <= c
Rat hurwitz_brute(long n) {
  Rat s = 0;
  long D = -n;
  for (long a = 1; a * a <= n; ++a)
    for (long b = -a; b <= a; ++b)
      for (long c = a; 4 * a * c <= n + b * b; ++c) {
        if (b * b - 4 * a * c != D) continue;
        // reduced: |b| <= a <= c, b >= 0 if |b| = a or a = c
        if ((std::abs(b) == a || a == c) && b < 0) continue;
        if (a == b && a == c)
          s += Rat(1, 3);
        else if (b == 0 && a == c)
          s += Rat(1, 2);
        else
          s += 1;
      }
  s.canonicalize();
  return s;
}

// Gamma_0(N)-equivalence by brute search over matrices with small entries
bool brute_equivalent(const QuadForm& p, const QuadForm& q, long N) {
  const long B = 12;
  for (long al = -B; al <= B; ++al)
    for (long ga = -B; ga <= B; ga++) {
      if (mod(ga, N) != 0 || std::gcd(al, ga) != 1) continue;
      for (long be = -B; be <= B; ++be)
        for (long de = -B; de <= B; ++de)
          if (al * de - be * ga == 1 && act(p, {al, be, ga, de}) == q) return true;
    }
  return false;
}

}  // namespace

TEST(Heegner, SmallDiscriminants) {
  auto c3 = enumerate_classes(-3, 1);
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].form, (QuadForm{1, 1, 1}));
  EXPECT_EQ(c3[0].stabilizer, 3);
  auto c4 = enumerate_classes(-4, 1);
  ASSERT_EQ(c4.size(), 1u);
  EXPECT_EQ(c4[0].stabilizer, 2);
  auto c15 = enumerate_classes(-15, 1);
  ASSERT_EQ(c15.size(), 2u);
  EXPECT_EQ(c15[0].form, (QuadForm{1, 1, 4}));
  EXPECT_EQ(c15[1].form, (QuadForm{2, 1, 2}));
  EXPECT_THROW(enumerate_classes(-5, 1), DomainError);
}

TEST(Heegner, WeightedCountIsHurwitz) {
  for (long n = 3; n <= 100; ++n) {
    if (mod(-n, 4) > 1) continue;
    Rat s = 0;
    for (const auto& c : enumerate_classes(-n, 1)) s += Rat(1, c.stabilizer);
    s.canonicalize();
    EXPECT_EQ(s, hurwitz_brute(n)) << n;
    EXPECT_EQ(class_number(1, n, 1), hurwitz_brute(n)) << n;
  }
}

TEST(Heegner, LevelNClassesAreDistinctAndComplete) {
  for (long N : {11L, 17L}) {
    for (long D : {-7L, -15L, -19L, -20L, -35L, -44L}) {
      auto cls = enumerate_classes(D, N);
      for (std::size_t i = 0; i < cls.size(); ++i) {
        EXPECT_EQ(mod(cls[i].form.a, N), 0);
        EXPECT_EQ(cls[i].form.disc(), D);
        for (std::size_t j = i + 1; j < cls.size(); ++j)
          EXPECT_FALSE(brute_equivalent(cls[i].form, cls[j].form, N)) << N << " " << D;
      }
      // every form [N a, b, c] with small entries lands in a listed class
      std::set<ClassKey> keys;
      for (const auto& c : cls) keys.insert(c.key);
      for (long a = N; a <= 6 * N; a += N)
        for (long b = -a; b <= a; ++b) {
          if ((b * b - D) % (4 * a) != 0) continue;
          QuadForm q{a, b, (b * b - D) / (4 * a)};
          EXPECT_TRUE(keys.count(class_key(q, N))) << q.str();
        }
    }
  }
}

TEST(Heegner, ClassKeyIsInvariant) {
  std::mt19937 rng(3);
  const long N = 11;
  for (const auto& c : enumerate_classes(-35, N)) {
    for (int it = 0; it < 20; ++it) {
      // random element of Gamma_0(N)
      long ga = N * (static_cast<long>(rng() % 5) - 2), de = static_cast<long>(rng() % 7) + 1;
      if (std::gcd(ga, de) != 1) continue;
      long al, be;
      detail::ext_gcd(de, -ga, al, be);  // de al - ga be = 1
      QuadForm q = act(c.form, {al, be, ga, de});
      EXPECT_EQ(class_key(q, N), c.key);
      EXPECT_EQ(genus_character(q, 5, N), genus_character(c.form, 5, N));
    }
  }
}

TEST(Heegner, GenusCharacter) {
  EXPECT_EQ(genus_character({1, 1, 4}, 1, 1), 1);
  EXPECT_EQ(genus_character({1, 1, 4}, 5, 1), 1);
  EXPECT_EQ(genus_character({2, 1, 2}, 5, 1), -1);
}

TEST(Heegner, CMPoints) {
  CMPoint z = cm_point({2, 1, 2});
  EXPECT_EQ(z.re, Rat(-1, 4));
  EXPECT_EQ(z.im_over_sqrt, Rat(1, 4));
  EXPECT_EQ(z.absdisc, 15);
}

TEST(Heegner, ClassicalSingularModuli) {
  QSeries j = j_series(60);
  auto jv = [&](const QuadForm& q) { return evaluate_at_cm(j, cm_point(q), 128).value; };
  EXPECT_NEAR(jv({1, 0, 1}).re.to_double(), 1728.0, 1e-20 * 1728);
  EXPECT_NEAR(jv({1, 1, 1}).re.to_double(), 0.0, 1e-20);
  Complex z = evaluate_at_cm(j_series(200), cm_point({1, 1, 41}), 256).value;
  Real expect = -Real(Int(640320), 256) * Real(Int(640320), 256) * Real(Int(640320), 256);
  EXPECT_LT(abs(z.re - expect).to_double(), 1e-10);
  EXPECT_THROW(evaluate_at_cm(j_series(5), cm_point({1, 0, 1}), 256), InsufficientTruncation);
}

TEST(Heegner, ClassNumbers) {
  EXPECT_EQ(class_number(1, 4, 1), Rat(1, 2));
  EXPECT_EQ(class_number(1, 3, 1), Rat(1, 3));
  EXPECT_EQ(class_number(5, 3, 1), Rat(0));
  for (long delta : {5L, 8L, 12L, 13L})
    for (long d = 1; d <= 50; ++d)
      if (admissible_index(d)) EXPECT_EQ(class_number(delta, d, 1), Rat(0)) << delta << " " << d;
}

TEST(Heegner, TraceMatchesBasisCoefficient) {
  auto B = plus_space_basis(20, 400);
  TraceResult t = trace_J(1, 5, 3, 256);
  EXPECT_EQ(t.value_over_sqrt_delta, Rat(-85995));
  EXPECT_LT(t.residual, 1e-10);
  for (long n = 1; n <= 3; ++n) {
    TraceResult u = trace_J(n, 8, 4, 256);
    EXPECT_EQ(u.value_over_sqrt_delta, Rat(hecke_A(*B, n, 8, 4))) << n;
  }
}
