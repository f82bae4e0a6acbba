#include <gtest/gtest.h>

#include "hlift/forms.hpp"

using namespace hlift;

namespace {

// Delta by naive product expansion
std::vector<Int> delta_naive(long T) {
  std::vector<Int> p(T, Int(0));
  p[0] = 1;
  for (long n = 1; n < T; ++n)
    for (int r = 0; r < 24; ++r)
      for (long e = T - 1; e >= n; --e) p[e] -= p[e - n];
  std::vector<Int> out(T, Int(0));
  for (long e = 1; e < T; ++e) out[e] = p[e - 1];
  return out;
}

}  // namespace

TEST(Forms, JCoefficients) {
  ZSeries j = j_z(50);
  EXPECT_EQ(j.at(-1), 1);
  EXPECT_EQ(j.at(0), 744);
  EXPECT_EQ(j.at(1), 196884);
  EXPECT_EQ(j.at(2), 21493760);
  EXPECT_EQ(j.at(3), 864299970);
  EXPECT_EQ(j.trunc(), 50);
}

TEST(Forms, DeltaMatchesProduct) {
  ZSeries d = delta_z(40);
  auto ref = delta_naive(40);
  for (long n = 0; n < 40; ++n) EXPECT_EQ(d.at(n), ref[n]) << n;
  EXPECT_EQ(d.at(2), -24);
  EXPECT_EQ(d.at(3), 252);
}

TEST(Forms, EisensteinIdentity) {
  const long T = 60;
  ZSeries e4 = eisenstein_z(4, T), e6 = eisenstein_z(6, T);
  ZSeries lhs = (e4 * e4 * e4 - e6 * e6).divexact(Int(1728));
  EXPECT_EQ(lhs, delta_z(T));
  EXPECT_EQ(e4 * e4, eisenstein_z(8, T));
  EXPECT_EQ(e4 * e6, eisenstein_z(10, T));
}

TEST(Forms, LogDerivativeOfDelta) {
  const long T = 52;
  ZSeries d = delta_z(T);
  EXPECT_EQ(d.theta(), eisenstein_z(2, T) * d);
}

TEST(Forms, FaberPolynomials) {
  EXPECT_EQ(faber_polynomial(0), (std::vector<Int>{Int(1)}));
  EXPECT_EQ(faber_polynomial(1), (std::vector<Int>{Int(-744), Int(1)}));
  EXPECT_EQ(faber_polynomial(2), (std::vector<Int>{Int(159768), Int(-1488), Int(1)}));
}

TEST(Forms, FaberJMatchesPolynomialInJ) {
  const long T = 20;
  for (long n = 1; n <= 4; ++n) {
    ZSeries j = j_z(T + n);
    auto P = faber_polynomial(n);
    ZSeries acc = ZSeries::zero(-n, T);
    ZSeries pw = ZSeries::zero(0, T + n);
    pw.ref(0) = 1;
    for (std::size_t k = 0; k < P.size(); ++k) {
      acc += P[k] * pw.rebased(-n).truncated(T);
      pw = pw * j;
    }
    EXPECT_EQ(acc, faber_J_z(n, T)) << n;
  }
}

TEST(Forms, ThetaAndEtaQuotients) {
  ZSeries th = theta_z(30);
  EXPECT_EQ(th.at(0), 1);
  EXPECT_EQ(th.at(1), 2);
  EXPECT_EQ(th.at(4), 2);
  EXPECT_EQ(th.at(2), 0);
  // eta(2 tau)^5 / (eta(tau)^2 eta(4 tau)^2) = theta
  EtaQuotient e{{{2, 5}, {1, -2}, {4, -2}}};
  EXPECT_EQ(e.valuation(), Rat(0));
  QSeries s = eta_quotient_series(e, Rat(30));
  EXPECT_FALSE(first_mismatch(s, th.to_qseries()));
  EtaQuotient d{{{1, 24}}};
  EXPECT_EQ(d.valuation(), Rat(1));
  EXPECT_FALSE(first_mismatch(eta_quotient_series(d, Rat(30)), delta_series(30)));
}

TEST(Forms, UnsupportedWeightThrows) {
  EXPECT_THROW(eisenstein(12, 10), DomainError);
  EXPECT_THROW(eisenstein_z(3, 10), DomainError);
}
