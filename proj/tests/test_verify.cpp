#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/strategies.hpp"
#include "stratexp/verify.hpp"

using namespace stratexp;
using stratexp::testing::repeat;

namespace {

const ModelParams kDefault(0.2, 0.9, 1, 10, 0.6);
const ModelParams k622(0.9, 0.5, 1, 3, 0.5);
const ModelParams kRemark6(0.9, 0.85, 1, 2, 0.3);
const ModelParams kThreshold(0.5, 0.5, 1, 5, 0.6);

OneShotOptions depth(int d) {
  OneShotOptions o;
  o.depth = d;
  return o;
}

}  // namespace

TEST(OneShot, ThresholdPassesWhenConditionHolds) {
  const CutoffSet cs = compute_cutoffs(kThreshold, 4);
  ASSERT_GE(phi_iterate(kThreshold.p0(), cs.N_hat - 1, kThreshold),
            cutoff_p_star_n(kThreshold, cs.N_hat));
  const DeviationReport r =
      one_shot_deviation_check(kThreshold, make_threshold_phat(kThreshold), depth(2 * (cs.N_hat + 3)));
  EXPECT_TRUE(r.pass) << (r.first_failure ? r.first_failure->history : "");
  EXPECT_FALSE(r.first_failure.has_value());
}

TEST(OneShot, ThresholdFailsAtTheNamedNode) {
  // default params: N^ = 9 and phi^8(p0) < p*_9
  const CutoffSet cs = compute_cutoffs(kDefault, 10);
  ASSERT_LT(phi_iterate(kDefault.p0(), cs.N_hat - 1, kDefault), cutoff_p_star_n(kDefault, cs.N_hat));
  const DeviationReport r =
      one_shot_deviation_check(kDefault, make_threshold_phat(kDefault), depth(2 * cs.N_hat));
  EXPECT_FALSE(r.pass);
  const std::string node = repeat("RR", cs.N_hat - 1) + "R";
  bool named = false;
  for (const auto& c : r.nodes) {
    if (c.history == node && !c.pass && c.deviation == Action::kSafe) named = true;
  }
  EXPECT_TRUE(named);
}

TEST(OneShot, PureExamplesPass) {
  EXPECT_TRUE(one_shot_deviation_check(k622, make_example_622(k622), depth(8)).pass);
  EXPECT_TRUE(one_shot_deviation_check(kRemark6, make_remark6(kRemark6), depth(8)).pass);
}

TEST(OneShot, PureExampleExercisesAllSixCases) {
  const DeviationReport r = one_shot_deviation_check(k622, make_example_622(k622), depth(10));
  std::set<int> seen;
  for (const auto& c : r.nodes) {
    const auto h = parse_actions(c.history);
    seen.insert(classify_622_case(h, count_from_scratch(h)));
  }
  for (int k = 1; k <= 6; ++k) EXPECT_TRUE(seen.count(k)) << "case " << k;
}

TEST(OneShot, PublicEquilibriaAreNotPrivateOnes) {
  EXPECT_FALSE(one_shot_deviation_check(kDefault, make_public_markov(kDefault), depth(8)).pass);
}

TEST(OneShot, ReportSerialisation) {
  const DeviationReport r = one_shot_deviation_check(k622, make_example_622(k622), depth(4));
  std::ostringstream os;
  r.write_csv(os);
  EXPECT_EQ(os.str().rfind("# format: stratexp/deviations/v1", 0), 0u);
  EXPECT_NE(r.to_json().find("\"format\": \"stratexp/deviations/v1\""), std::string::npos);
  // every history of length <= 4 has a node
  EXPECT_EQ(r.nodes.size(), 31u);
}

TEST(Nash, SigmaZeroIsAlwaysNash) {
  for (double p0 : {0.3, 0.6, 0.9}) {
    const NashCheck r = nash_check_sigma_n(kDefault.with_p0(p0), 0);
    EXPECT_TRUE(r.closed_form);
    EXPECT_TRUE(r.brute_force);
  }
}

TEST(Nash, SufficientConditionRegime) {
  // (n + 1) lambda + (1 - lambda)^(2n + N* + 2) < 1 with delta near 1
  const ModelParams pr(0.1, 0.999, 1, 30, 0.5);
  const int n = 3;
  const int ns = compute_cutoffs(pr, 0).N_star;
  ASSERT_LT((n + 1) * 0.1 + std::pow(0.9, 2 * n + ns + 2), 1.0);
  const NashCheck r = nash_check_sigma_n(pr, n);
  EXPECT_TRUE(r.closed_form);
  EXPECT_TRUE(r.brute_force);
}

TEST(Nash, LargeNIsNotNash) {
  const NashCheck r = nash_check_sigma_n(kDefault, 12);
  EXPECT_FALSE(r.closed_form);
  EXPECT_FALSE(r.brute_force);
  EXPECT_GT(r.best_gain, 0);
}

TEST(SettledBeliefs, ThresholdInValidRegime) {
  const int d = 2 * (compute_cutoffs(kThreshold, 0).N_hat + 3);
  const Theorem4Report r = check_theorem4(kThreshold, make_threshold_phat(kThreshold), d);
  EXPECT_TRUE(r.terminal_below_p_hat);
  EXPECT_TRUE(r.no_risky_below_p_hat);
}

TEST(SettledBeliefs, ThrowsForNonEquilibria) {
  EXPECT_THROW(check_theorem4(kDefault, make_threshold_phat(kDefault), 8), NotAnEquilibrium);
}

TEST(SettledBeliefs, PureExampleHasTwoExperiments) {
  const Theorem4Report r = check_theorem4(k622, make_example_622(k622), 8);
  EXPECT_TRUE(r.pass());
  ASSERT_EQ(r.ne_given_bad.size(), 1u);
  EXPECT_EQ(r.ne_given_bad.begin()->first, 2);
  EXPECT_EQ(compute_cutoffs(k622, 0).N_star, 1);
}

TEST(SupportBounds, BoundsOnCatalogEquilibria) {
  const Theorem6Report a = check_theorem6_bounds(k622, make_example_622(k622), 8);
  EXPECT_TRUE(a.pass());
  EXPECT_EQ(a.support, std::vector<int>{2});
  EXPECT_GE(2, a.n_star_social - 2);
  const Theorem6Report b = check_theorem6_bounds(kThreshold, make_threshold_phat(kThreshold));
  const int nh = compute_cutoffs(kThreshold, 0).N_hat;
  EXPECT_EQ(b.support, std::vector<int>{2 * nh});
  EXPECT_LE(2 * nh, 2 * b.n_star_social);
  EXPECT_THROW(check_theorem6_bounds(kThreshold, make_mixed_example(ModelParams(0.3, 0.9, 1, 5, 0.38))),
               InvalidParams);
}

TEST(DelayCertificate, GainEqualsFirstThoughtExperiment) {
  const ModelParams base(0.2, 0.9, 1, 10, 0.5);
  const double lo = phi_inverse(cutoff_p_hat(base), base), hi = cutoff_p_star_n(base, 1);
  ASSERT_LT(lo, hi);
  for (double f : {0.1, 0.5, 0.9}) {
    const Prop6Certificate c = prop6_certificate(base.with_p0(lo + f * (hi - lo)));
    EXPECT_GT(c.gain, 0);
    EXPECT_NEAR(c.gain, c.thought1, 1e-10);
  }
  const Prop6Certificate edge = prop6_certificate(base.with_p0(lo + 1e-9 * (hi - lo)));
  EXPECT_LT(edge.gain, 1e-8);
}

TEST(DelayCertificate, EmptyRegionIsDetected) {
  // phi^-1(p_hat) >= p*_1 here
  const ModelParams pr(0.9, 0.5, 1, 3, 0.5);
  ASSERT_GE(phi_inverse(cutoff_p_hat(pr), pr), cutoff_p_star_n(pr, 1));
  EXPECT_THROW(prop6_certificate(pr), HypothesisViolated);
}
