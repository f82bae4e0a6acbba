#include <gtest/gtest.h>

#include <sstream>

#include "hlift/cli.hpp"

using namespace hlift;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExpandJText) {
  auto r = call({"expand", "--object", "j", "--order", "3", "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "q^-1 + 744 + 196884 q + 21493760 q^2\n");
}

TEST(Cli, ExpandJsonRoundTrips) {
  auto r = call({"expand", "--object", "delta", "--order", "6"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["object"], "delta");
  QSeries back = QSeries::from_json(j["series"]);
  EXPECT_FALSE(first_mismatch(back, delta_series(6)));
}

TEST(Cli, ExpandCsv) {
  auto r = call({"expand", "--object", "theta", "--order", "5", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "exponent,coefficient\n0,1\n1,2\n4,2\n");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({"expand", "--object", "fd:1"}).code, 2);
  EXPECT_EQ(call({"expand", "--object", "nothing"}).code, 2);
  EXPECT_EQ(call({"expand", "--object", "j", "--format", "xml"}).code, 2);
  EXPECT_EQ(call({"expand"}).code, 2);
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"verify", "nope"}).code, 2);
  EXPECT_EQ(call({"verify", "thm41", "--delta", "5", "--d", "3"}).code, 2);
  EXPECT_EQ(call({"hecke", "--object", "j", "--p", "4"}).code, 2);
  EXPECT_EQ(call({"trace", "--delta", "5", "--d", "3", "--f", "j"}).code, 2);
  EXPECT_EQ(call({"expand", "--object", "g0:13"}).code, 2);
  auto r = call({"expand", "--object", "fd:1"});
  EXPECT_NE(r.err.find("usage error"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, HelpExitsZero) {
  auto r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}

TEST(Cli, VerifyThm31) {
  auto r = call({"verify", "thm31", "--delta", "5", "--d", "3", "--p", "2", "--order", "15"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["check"], "thm31");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["first_mismatch"].is_null());
  EXPECT_FALSE(j.contains("runtime_ms"));
}

TEST(Cli, FailingCheckExitsOne) {
  // the closed formula disagrees with the table at p = 2, ord_2(d) = 2
  auto r = call({"verify", "thm41", "--delta", "5", "--d", "4", "--p", "2", "--m", "2", "--nmax", "2"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(nlohmann::json::parse(r.out)["pass"].get<bool>());
  EXPECT_EQ(call({"verify", "cor42", "--delta", "5", "--d", "3", "--p", "2", "--m", "2", "--nmax", "4"}).code, 0);
}

TEST(Cli, HeckeAndProducts) {
  auto r = call({"mult-hecke", "--object", "delta", "--p", "2", "--order", "5", "--format", "text"});
  EXPECT_EQ(r.out, "q^3 - 72 q^4\n");
  r = call({"borcherds", "--delta", "1", "--d", "0", "--order", "4", "--format", "text"});
  EXPECT_EQ(r.out, "q - 24 q^2 + 252 q^3\n");
  r = call({"borcherds", "--delta", "1", "--d", "3", "--order", "2", "--format", "text"});
  EXPECT_EQ(r.out, "q^-1/3 + 248 q^2/3 + 4124 q^5/3\n");
  r = call({"hecke", "--object", "delta", "--k", "12", "--p", "2", "--order", "3", "--format", "text"});
  EXPECT_EQ(r.out, "-24 q + 576 q^2\n");
}

TEST(Cli, Traces) {
  auto r = call({"trace", "--delta", "5", "--d", "3", "--f", "Jn:1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["value_over_sqrt_delta"], "-85995");
  r = call({"trace", "--delta", "5", "--d", "7", "--N", "11", "--f", "fminus:11,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["value_over_sqrt_delta"], "0");
  EXPECT_EQ(call({"trace", "--delta", "5", "--d", "7", "--N", "17", "--f", "fplus:11,2"}).code, 2);
  r = call({"class-number", "--delta", "1", "--d", "3", "--format", "text"});
  EXPECT_EQ(r.out, "1/3\n");
}

TEST(Cli, LevelVerifiersAndTable) {
  EXPECT_EQ(call({"verify", "thm44", "--N", "11", "--delta", "5", "--d", "7", "--p", "2", "--nmax", "3"}).code, 0);
  EXPECT_EQ(call({"verify", "div3", "--N", "11", "--delta", "5", "--d", "7", "--nmax", "4"}).code, 0);
  auto r = call({"table", "--kind", "cor46", "--N", "11"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "N,delta,d,p,kronecker,H,H_dp2,expected,diff_mod_p,pass");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args = {"verify", "hep", "--N", "11", "--delta", "5", "--d", "7", "--p", "3", "--nmax", "3"};
  auto a = call(args), b = call(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, BadConfigIsAComputationError) {
  auto r = call({"expand", "--object", "g0:11", "--config", "/nonexistent/curves.conf"});
  EXPECT_EQ(r.code, 1);
}
