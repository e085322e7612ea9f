#include <gtest/gtest.h>

#include <algorithm>
#include <string>

#include "oracles.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/game_tree.hpp"
#include "stratexp/strategies.hpp"

using namespace stratexp;
using stratexp::testing::repeat;

namespace {

const ModelParams kDefault(0.2, 0.9, 1, 10, 0.6);
const ModelParams k622(0.9, 0.5, 1, 3, 0.5);
const ModelParams kMixed(0.3, 0.9, 1, 5, 0.38);

double sigma_at(const ModelParams& pr, ProfilePtr prof, const std::string& h) {
  GameTree tree(pr, prof);
  return tree.prob_risky(tree.find(h));
}

}  // namespace

TEST(SigmaN, StopsAfterSchedule) {
  const int ns = compute_cutoffs(kDefault, 0).N_star;
  auto s0 = make_sigma_n(kDefault, 0);
  EXPECT_EQ(sigma_at(kDefault, s0, repeat("RR", ns)), 0.0);
  EXPECT_EQ(sigma_at(kDefault, s0, repeat("RR", ns - 1) + "R"), 1.0);
  auto s2 = make_sigma_n(kDefault, 2);
  EXPECT_EQ(sigma_at(kDefault, s2, repeat("RR", ns + 2)), 0.0);
  EXPECT_EQ(sigma_at(kDefault, s2, repeat("RR", ns + 1)), 1.0);
}

TEST(SigmaN, OffPathIsRisky) {
  auto s = make_sigma_n(kDefault, 1);
  for (const char* h : {"S", "RS", "RRS", "RRRRRS", "SR"}) {
    EXPECT_EQ(sigma_at(kDefault, s, h), 1.0) << h;
  }
}

TEST(SigmaN, VerbalAndScriptDefinitionsAgree) {
  auto a = make_sigma_n(kDefault, 0);
  auto b = make_sigma0(kDefault);
  GameTree ta(kDefault, a), tb(kDefault, b);
  // every history up to length 10
  for (int len = 0; len <= 10; ++len) {
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::string h;
      for (int i = 0; i < len; ++i) h += (mask >> i) & 1 ? 'R' : 'S';
      EXPECT_EQ(ta.prob_risky(ta.find(h)), tb.prob_risky(tb.find(h))) << h;
    }
  }
}

TEST(SigmaN, RejectsLowPrior) {
  EXPECT_THROW(make_sigma_n(kDefault.with_p0(0.1), 0), PriorTooLow);
  EXPECT_THROW(make_sigma_n(kDefault, -1), InvalidParams);
}

TEST(Threshold, RootAndConviction) {
  auto t = make_threshold_phat(kDefault);
  EXPECT_EQ(sigma_at(kDefault, t, ""), 1.0);  // p0 >= p_hat
  const ModelParams low = kDefault.with_p0(0.15);
  EXPECT_EQ(sigma_at(low, make_threshold_phat(low), ""), 0.0);
  // player 2 sees player 1 experiment past his own schedule end
  GameTree tree(kDefault, t);
  const NodeId n = tree.find(repeat("RR", 9) + "R");
  if (tree.belief(n, 1).p.is_certain()) EXPECT_EQ(tree.prob_risky(n), 1.0);
}

TEST(Threshold, OnPathPlayInBadState) {
  // (RR)^N^ then S forever when the threshold condition holds
  const ModelParams pr(0.5, 0.5, 1, 5, 0.6);
  const CutoffSet cs = compute_cutoffs(pr, 4);
  ASSERT_GE(phi_iterate(pr.p0(), cs.N_hat - 1, pr), cutoff_p_star_n(pr, cs.N_hat));
  const PayoffReport r = eval_profile(pr, make_threshold_phat(pr));
  ASSERT_EQ(r.ne_given_bad.size(), 1u);
  EXPECT_EQ(r.ne_given_bad.begin()->first, 2 * cs.N_hat);
}

TEST(PureExample, NodesFromTheConstruction) {
  auto p = make_example_622(k622);
  EXPECT_EQ(sigma_at(k622, p, "RRR"), 1.0);
  EXPECT_EQ(sigma_at(k622, p, "RSSRRR"), 1.0);
  EXPECT_EQ(sigma_at(k622, p, "RS"), 0.0);
  EXPECT_EQ(sigma_at(k622, p, ""), 1.0);
}

TEST(MixedExample, AlphaBetaAndResidual) {
  auto m = make_mixed_example(kMixed);
  EXPECT_GT(m->alpha(), 0.0);
  EXPECT_LT(m->alpha(), 1.0);
  EXPECT_GT(m->beta(), 0.0);
  EXPECT_LT(m->beta(), 1.0);
  EXPECT_LT(std::abs(m->residual()), 1e-10);
  EXPECT_NEAR(m->alpha(), MixedExampleProfile::alpha_formula(kMixed), 1e-15);
  // beta = 0 leaves player 1 strictly preferring S at RS
  EXPECT_LT(MixedExampleProfile::indifference_gap(kMixed, m->alpha(), 0.0), 0.0);
}

TEST(MixedExample, BetaAgreesWithBisectionOnTheEvaluator) {
  const double alpha = MixedExampleProfile::alpha_formula(kMixed);
  auto gap = [&](double beta) {
    auto prof = std::make_shared<MixedExampleProfile>(kMixed, alpha, beta);
    GameTree tree(kMixed, prof);
    Evaluator ev(tree);
    const NodeId rs = tree.find("RS");
    return ev.action_value(rs, Action::kRisky) - ev.action_value(rs, Action::kSafe);
  };
  double lo = 0, hi = 1;
  ASSERT_LT(gap(lo), 0);
  ASSERT_GT(gap(hi), 0);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0 ? lo : hi) = mid;
  }
  EXPECT_NEAR(make_mixed_example(kMixed)->beta(), 0.5 * (lo + hi), 1e-9);
}

TEST(MixedExample, HypothesesAreChecked) {
  // satisfies delta - lambda >= 0.8 but phi(p*) falls outside (p_hat, p_hat_1)
  EXPECT_THROW(make_mixed_example(ModelParams(0.1, 0.95, 1, 15, 0.5)), HypothesisViolated);
  EXPECT_THROW(make_mixed_example(kMixed.with_p0(0.9)), HypothesisViolated);
}

TEST(PublicMarkov, ZeroBelowCutoffAndIndifferentInside) {
  auto pm = make_public_markov(kDefault);
  const double ps = cutoff_p_star(kDefault);
  int interior = 0;
  for (std::size_t k = 0; k < pm->ladder().size(); ++k) {
    const auto& r = pm->ladder()[k];
    if (r.p <= ps) EXPECT_EQ(r.f, 0.0) << k;
    if (r.p > ps) EXPECT_GT(r.f, 0.0) << k;
    if (r.f > 0 && r.f < 1) {
      ++interior;
      EXPECT_LT(std::abs(pm->residual(k)), 1e-10) << k;
    }
  }
  EXPECT_GT(interior, 0);
  // exactly at p*
  const auto pm_at = make_public_markov(kDefault.with_p0(ps));
  EXPECT_EQ(pm_at->ladder().front().f, 0.0);
}

TEST(RevisionEquilibrium, RZeroMaximisesGamma) {
  auto ab = make_appendixB_SE(kDefault);
  const auto& g = ab->gamma_r();
  const int ns = compute_cutoffs(kDefault, 0).N_star;
  ASSERT_EQ(static_cast<int>(g.size()), ns + 1);
  for (double x : g) EXPECT_GE(g[ab->r0()] + 1e-12, x);
}

TEST(RevisionEquilibrium, ScenarioWithAllAlternationStopsAfterNStar) {
  const int ns = compute_cutoffs(kDefault, 0).N_star;
  const PayoffReport r = eval_profile(kDefault, make_gamma_r_scenario(kDefault, ns));
  ASSERT_EQ(r.ne_given_bad.size(), 1u);
  EXPECT_EQ(r.ne_given_bad.begin()->first, ns);
}

TEST(Catalog, NamesResolve) {
  for (const auto& name : catalog_names()) {
    const ModelParams& pr = name == "example_622"   ? k622
                            : name == "remark6"     ? ModelParams(0.9, 0.85, 1, 2, 0.3)
                            : name == "mixed_example" ? kMixed
                                                      : kDefault;
    EXPECT_NO_THROW(make_profile(name, pr)) << name;
  }
  EXPECT_EQ(make_profile("sigma_n:n=3", kDefault)->name(), make_sigma_n(kDefault, 3)->name());
  EXPECT_THROW(make_profile("nope", kDefault), ParseError);
  EXPECT_THROW(make_profile("sigma_n:n", kDefault), ParseError);
}
