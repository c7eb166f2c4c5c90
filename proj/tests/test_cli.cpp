#include "hamlat/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

#include "json.hpp"
#include "support/cli_cases.hpp"

namespace {

using namespace hamlat::testing;
using Json = nlohmann::ordered_json;

class Golden : public ::testing::TestWithParam<Case> {};

TEST_P(Golden, JsonOutputMatches) {
  const Case& c = GetParam();
  auto args = c.args;
  args.push_back("--json");
  const auto got = invoke(args);
  EXPECT_EQ(got.code, c.exit_code) << got.err;
  const std::string path = kGolden + "/" + c.name + ".json";
  if (std::getenv("HAMLAT_UPDATE_GOLDEN") != nullptr) {
    std::ofstream(path) << got.out;
    return;
  }
  const std::string want = read_text(path);
  ASSERT_FALSE(want.empty()) << "missing golden file " << path;
  EXPECT_EQ(got.out, want);
  // Every JSON answer parses and carries the ok flag; failures name their class.
  const auto j = Json::parse(got.out);
  ASSERT_TRUE(j.contains("ok"));
  EXPECT_EQ(j["ok"].get<bool>(), c.exit_code == 0);
  if (c.exit_code == 2) {
    const std::string kind = j["error"]["kind"];
    EXPECT_TRUE(kind == "usage" || kind == "input" || kind == "resource_limit") << kind;
    EXPECT_EQ(got.err.rfind("hamlat: ", 0), 0U) << got.err;
  }
}

INSTANTIATE_TEST_SUITE_P(Cli, Golden, ::testing::ValuesIn(cases()),
                         [](const ::testing::TestParamInfo<Case>& info) { return info.param.name; });

TEST(CliText, PlainAnswers) {
  auto r = invoke({"steinitz", "mul", "2^3*3", "3^inf"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2^3*3^inf\n");
  r = invoke({"chain", "decompose", "--sizes", "2,6,12,60"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("primes 2,3,2,5"), std::string::npos);
  EXPECT_NE(r.out.find("st 2^2*3*5"), std::string::npos);
}

TEST(CliText, ErrorClassesWithoutJson) {
  auto r = invoke({"frobnicate"});
  EXPECT_EQ(r.code, hamlat::cli::kExitUsage);
  EXPECT_EQ(r.err.rfind("hamlat: ", 0), 0U);
  // A verification failure still reports its diagnostics.
  r = invoke({"chain", "validate", "--sizes", "2,5"});
  EXPECT_EQ(r.code, hamlat::cli::kExitVerificationFailed);
  EXPECT_NE(r.out.find("not_divisible"), std::string::npos);
  r = invoke({"cartan", "count", "4", "--field", "gf5"});
  EXPECT_EQ(r.code, hamlat::cli::kExitUsage);
}

TEST(CliText, OutFlagWritesFile) {
  const std::string path = ::testing::TempDir() + "hamlat_out.json";
  const auto r = invoke({"steinitz", "lcm", "2", "3", "--json", "--out", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  const auto j = Json::parse(read_text(path));
  EXPECT_EQ(j["result"], "2*3");
}

TEST(CliText, WorkersDoNotChangeTheReport) {
  const auto one = invoke({"cartan", "verify-theorem3", "--field", "q", "--sizes", "2,4", "--trials", "100", "--json"});
  const auto two = invoke({"cartan", "verify-theorem3", "--field", "q", "--sizes", "2,4", "--trials", "100",
                           "--workers", "2", "--json"});
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, two.out);
}

}  // namespace
