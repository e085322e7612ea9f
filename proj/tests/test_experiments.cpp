#include <gtest/gtest.h>

#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/experiments.hpp"
#include "stratexp/sweep.hpp"

using namespace stratexp;

TEST(CsvTable, HeaderMetaAndRows) {
  CsvTable t("demo", {"a", "b"});
  t.meta("seed", "5");
  t.row({"1", "2"});
  const std::string s = t.str();
  EXPECT_EQ(s.rfind("# format: stratexp/demo/v1", 0), 0u);
  EXPECT_NE(s.find("a,b\n1,2"), std::string::npos);
  EXPECT_EQ(t.size(), 1u);
}

TEST(Reproduce, UnknownTargetThrows) { EXPECT_THROW(reproduce("nope"), InvalidParams); }

TEST(Reproduce, OverExperimentationBoundFailsFromFourteen) {
  const TargetResult r = reproduce("lemma8");
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.numbers.at("first_failure"), 14);
}

TEST(Reproduce, CheapTargetsPass) {
  for (const char* t : {"fig1-beliefs", "fig3-beliefs", "lemma2-sandwich", "public-markov"}) {
    const TargetResult r = reproduce(t);
    EXPECT_TRUE(r.pass) << t << ": " << r.summary;
    EXPECT_GT(r.table.size(), 0u) << t;
  }
}

TEST(Ordering, SmallSuiteHasNoViolations) {
  const OrderingReport r = cutoff_ordering_suite(500, 9);
  EXPECT_TRUE(r.pass());
  EXPECT_EQ(r.points, 500);
}

TEST(Sweep, SyntaxErrorsAreLocated) {
  try {
    parse_sweep("{\n  \"name\": \"x\",\n  \"base\": }");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_GT(e.column(), 1);
  }
}

TEST(Sweep, SemanticErrorsAreLocated) {
  const std::string text =
      "{\"name\": \"x\", \"base\": \"0.2,0.9,1,10,0.6\",\n"
      " \"axes\": [{\"param\": \"bogus\", \"values\": [1]}],\n"
      " \"metrics\": [\"p_star\"]}";
  try {
    parse_sweep(text);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(parse_sweep("{\"name\": \"x\", \"base\": \"0.2,0.9,1,10,0.6\", \"axes\": [], "
                           "\"metrics\": [\"wat\"]}"),
               ConfigError);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  const std::string text =
      "{\"name\": \"t\", \"base\": \"0.2,0.9,1,10,0.6\","
      " \"axes\": [{\"param\": \"lambda\", \"from\": 0.05, \"to\": 0.95, \"steps\": 12},"
      "            {\"param\": \"p0\", \"values\": [0.3, 0.6, 0.9]}],"
      " \"metrics\": [\"p_star\", \"N_hat\", \"ne:sigma0\", \"cor7:1\"]}";
  SweepSpec a = parse_sweep(text), b = a;
  a.threads = 1;
  b.threads = 8;
  const CsvTable ta = run_sweep(a), tb = run_sweep(b);
  EXPECT_EQ(ta.size(), 36u);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Sweep, HoldGKeepsGainFixed) {
  SweepSpec s = parse_sweep(
      "{\"name\": \"g\", \"base\": \"0.2,0.9,1,10,0.6\", \"hold_g\": true,"
      " \"axes\": [{\"param\": \"lambda\", \"values\": [0.1, 0.5]}], \"metrics\": [\"p_star\"]}");
  s.threads = 1;
  // g = 0.2 * 10 - 1 = 1, so m = 2 / lambda
  const std::string out = run_sweep(s).str();
  EXPECT_NE(out.find("0.1,0.9,1,20,0.6"), std::string::npos) << out;
  EXPECT_NE(out.find("0.5,0.9,1,4,0.6"), std::string::npos) << out;
}

TEST(NashSufficientCondition, MatchesFormula) {
  const ModelParams pr(0.1, 0.999, 1, 30, 0.5);
  const int ns = compute_cutoffs(pr, 0).N_star;
  for (int n = 0; n <= 12; ++n) {
    EXPECT_EQ(corollary7_condition(pr, n), (n + 1) * 0.1 + std::pow(0.9, 2 * n + ns + 2) < 1) << n;
  }
}
