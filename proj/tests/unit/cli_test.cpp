#include "gtest_precision.hpp"

#include <charexp_cli/run.hpp>

using namespace charexp;
using namespace charexp::cli;

namespace {

RunConfig config_from(const std::string& text) {
  RunConfig c;
  apply_key_values(parse_key_values(text), c);
  check_config(c);
  return c;
}

}  // namespace

TEST(CliParse, KeyValueForms) {
  const auto kv = parse_key_values("# comment\nD1 = 0.5\nB6 9   # trailing\n\nL=0.25\n");
  EXPECT_EQ(kv.at("D1"), "0.5");
  EXPECT_EQ(kv.at("B6"), "9");
  EXPECT_EQ(kv.at("L"), "0.25");
  EXPECT_THROW(parse_key_values("B7 = 1\n"), UsageError);
  EXPECT_THROW(parse_key_values("B6 = 1\nB6 = 2\n"), UsageError);
  EXPECT_THROW(parse_key_values("B6\n"), UsageError);
}

TEST(CliParse, SolverKeys) {
  const RunConfig c = config_from("B6 = 4\nm = 60\nK = 8\nlmax = 15\nlambda = 0.5\noracle = hill\n");
  EXPECT_EQ(*c.m, 60);
  EXPECT_EQ(c.K, 8);
  EXPECT_EQ(*c.lmax, 15);
  EXPECT_EQ(*c.lambda, Real("0.5"));
  EXPECT_EQ(c.oracle, OracleChoice::hill);
  EXPECT_EQ(c.params.b(6), 4);
  EXPECT_EQ(c.params.d(3), 0);
}

TEST(CliParse, Rejections) {
  EXPECT_THROW(config_from("B6 = -1\n"), UsageError);
  EXPECT_THROW(config_from("L = 1\n"), UsageError);
  EXPECT_THROW(config_from("B6 = 1\nK = 0\n"), UsageError);
  EXPECT_THROW(config_from("B6 = 1\nprecision = 32\n"), UsageError);
  EXPECT_THROW(config_from("B6 = 1\nm = ten\n"), UsageError);
  EXPECT_THROW(config_from("B6 = 1x\n"), UsageError);
  EXPECT_THROW(parse_oracle("all"), UsageError);
}

TEST(CliParse, SweepRows) {
  const auto rows = parse_sweep("B6=9 L=0.3\n\n# skip\nB6=4 D1=1\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].at("D1"), "1");
  EXPECT_THROW(parse_sweep("B6 9\n"), UsageError);
  EXPECT_THROW(parse_sweep("\n"), UsageError);
}

TEST(CliRun, RegularOriginWithOdeOracle) {
  RunConfig c = config_from("B6 = 9\nL = 0.3\nB2 = 1.5\noracle = ode\n");
  const RunOutcome out = run_pipeline(c);
  EXPECT_EQ(out.exit_code, 0);
  const auto& r = out.report;
  const Real re = parse_real(r["exponent"]["cos_two_pi_omega"]["re"].get<std::string>());
  EXPECT_LT(abs(re - cos(Real("0.6") * pi())), Real(1e-8));
  ASSERT_TRUE(r.contains("oracle"));
  EXPECT_TRUE(r["oracle"]["ode"]["agrees"].get<bool>());
  for (const char* key : {"input", "config", "frame", "e_grid", "stokes", "circuit_matrix", "exponent",
                          "solutions", "convergence", "status", "warnings"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  // Full working precision in the decimal output.
  EXPECT_GE(r["frame"]["s0"].get<std::string>().size(), 75u);
}

TEST(CliRun, Deterministic) {
  RunConfig c = config_from("B6 = 5\nD1 = 0.5\nB3 = -1\nL = 0.7\nlmax = 18\n");
  EXPECT_EQ(run_pipeline(c).report.dump(), run_pipeline(c).report.dump());
}

TEST(CliRun, FatalErrorCarriesModule) {
  // lambda = 0 with tau(1) = 3 makes mu(1) integral.
  RunConfig c = config_from("B6 = 9\nB3 = -9\nlambda = 0\n");
  const RunOutcome out = run_pipeline(c);
  EXPECT_EQ(out.exit_code, 2);
  EXPECT_EQ(out.report["status"]["error"]["module"], "frame");
  EXPECT_EQ(out.report["status"]["error"]["kind"], "lambda-degenerate");
}

TEST(CliRun, CsvRow) {
  RunConfig c = config_from("B6 = 9\nlmax = 12\n");
  const RunOutcome out = run_pipeline(c);
  const std::string row = csv_row(3, out.report);
  EXPECT_EQ(row.rfind("3,0,", 0), 0u);
  const std::string header = csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
}
