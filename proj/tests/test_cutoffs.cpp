#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stratexp/closed_forms.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/experiments.hpp"

using namespace stratexp;

namespace {

const ModelParams kDefault(0.2, 0.9, 1, 10, 0.6);

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(lo) < 0) == (f(mid) < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Params, RejectsInvalidTuples) {
  EXPECT_THROW(ModelParams(0.0, 0.9, 1, 10, 0.5), InvalidParams);
  EXPECT_THROW(ModelParams(0.2, 1.0, 1, 10, 0.5), InvalidParams);
  EXPECT_THROW(ModelParams(0.2, 0.9, 1, 4, 0.5), InvalidParams);  // g < 0
  EXPECT_THROW(ModelParams(0.2, 0.9, 1, 10, 1.0), InvalidParams);
  EXPECT_THROW(ModelParams::parse("0.2,0.9,1,10"), InvalidParams);
  EXPECT_THROW(ModelParams::parse("0.2,0.9,x,10,0.5"), InvalidParams);
}

TEST(Params, ParseRoundTrip) {
  const ModelParams p = ModelParams::parse(kDefault.to_string());
  EXPECT_EQ(p.lambda(), 0.2);
  EXPECT_EQ(p.m(), 10.0);
  EXPECT_DOUBLE_EQ(p.g(), 1.0);
}

TEST(Phi, FixedPointsAndHandValue) {
  EXPECT_EQ(phi(Belief::certain(), kDefault).value(), 1.0);
  EXPECT_EQ(phi(0.0, kDefault), 0.0);
  EXPECT_NEAR(phi(0.5, kDefault), 0.4 / 0.9, 1e-15);
}

TEST(Phi, IterateMatchesLikelihoodRatio) {
  EXPECT_DOUBLE_EQ(phi_iterate(0.6, 0, kDefault), 0.6);
  const double lr = 1.5 * std::pow(0.8, 7);
  EXPECT_NEAR(phi_iterate(0.6, 7, kDefault), lr / (1 + lr), 1e-14);
  EXPECT_NEAR(phi_iterate(0.6, 7, kDefault), 0.23930, 1e-5);
  EXPECT_TRUE(phi_iterate(Belief::certain(), 50, kDefault).is_certain());
}

TEST(Phi, InverseRoundTrip) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.001, 0.999);
  for (int i = 0; i < 100; ++i) {
    const double p = u(rng);
    EXPECT_NEAR(phi_inverse(phi(p, kDefault), kDefault), p, 1e-12);
  }
  EXPECT_EQ(phi_inverse(0.0, kDefault), 0.0);
  EXPECT_NEAR(phi_inverse(0.4 / 0.9, kDefault), 0.5, 1e-14);
}

TEST(Cutoffs, DefaultValuesAgainstIndependentRoots) {
  const double l = 0.2, d = 0.9, c = 1, m = 10, g = 1;
  // p~: (1-d)(p l m - c) + d p g = 0
  const double pt = bisect([&](double p) { return (1 - d) * (p * l * m - c) + d * p * g; }, 0, 1);
  EXPECT_NEAR(cutoff_p_tilde(kDefault), pt, 1e-12);
  EXPECT_NEAR(cutoff_p_tilde(kDefault), 0.090909, 1e-6);
  // p^: first thought experiment
  const double ph = bisect(
      [&](double p) { return (1 - d) * (p * l * m - c) + d * p * g * (l + d * (1 - l) * l); }, 0, 1);
  EXPECT_NEAR(cutoff_p_hat(kDefault), ph, 1e-12);
  EXPECT_NEAR(cutoff_p_hat(kDefault), 0.19623, 1e-5);
  EXPECT_NEAR(cutoff_p_star(kDefault), 0.1 / 0.38, 1e-15);
  EXPECT_NEAR(cutoff_p_star_social(kDefault), 0.17552, 1e-5);
  EXPECT_NEAR(cutoff_p_star(kDefault, std::sqrt(0.9)), cutoff_p_star_social(kDefault), 1e-15);
  EXPECT_EQ(cutoff_p_myop(kDefault), 0.5);
  EXPECT_LT(cutoff_p_star(kDefault), cutoff_p_myop(kDefault));
}

TEST(Cutoffs, ZeroIndexSpecializations) {
  EXPECT_DOUBLE_EQ(cutoff_p_hat_n(kDefault, 0), cutoff_p_hat(kDefault));
  EXPECT_DOUBLE_EQ(cutoff_p_star_n(kDefault, 0), cutoff_p_star(kDefault));
}

TEST(Cutoffs, PTildeNearOneDelta) {
  const ModelParams p(0.2, 0.999, 1, 10, 0.5);
  EXPECT_NEAR(cutoff_p_tilde(p), p.c() * (1 - p.delta()) / p.g(), 1e-5);
}

TEST(Cutoffs, OneThousandPointOrderings) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = sample_params(rng);
    const CutoffSet cs = compute_cutoffs(p, 0);
    EXPECT_LT(cs.p_tilde, cs.p_star);
    EXPECT_LE(cs.p_star_social, cs.p_bar);
    EXPECT_LT(cs.p_bar, cs.p_hat);
    EXPECT_GE(phi_inverse(cs.p_star_social, p), cs.p_bar);
    // N** - 2 <= N^ <= N**
    EXPECT_LE(cs.N_star_social - 2, cs.N_hat) << p.to_string();
    EXPECT_LE(cs.N_hat, std::max(cs.N_star_social, 1)) << p.to_string();
  }
}

TEST(Counts, DefaultNStarExact) {
  // 1.5 * 0.8^n < 5/14 first holds at n = 7
  EXPECT_EQ(compute_cutoffs(kDefault).N_star, 7);
  EXPECT_LT(1.5 * std::pow(0.8, 7), 5.0 / 14);
  EXPECT_GE(1.5 * std::pow(0.8, 6), 5.0 / 14);
  EXPECT_EQ(compute_cutoffs(kDefault.with_p0(0.2)).N_star, 0);
}

TEST(Counts, GenericityFlagNearCutoff) {
  const double ps = cutoff_p_star(kDefault);
  const CutoffSet cs = compute_cutoffs(kDefault.with_p0(ps + 1e-12), 0);
  EXPECT_TRUE(cs.genericity_flag);
  EXPECT_FALSE(cs.genericity_notes.empty());
}

TEST(ExactMode, RationalCutoffsMatchDouble) {
  exact::Params ep{exact::Rational(1, 5), exact::Rational(9, 10), 1, 10, exact::Rational(3, 5)};
  EXPECT_EQ(exact::p_star(ep), exact::Rational(5, 19));
  EXPECT_EQ(exact::first_index_below(ep, exact::p_star(ep)), 7);
  EXPECT_NEAR(static_cast<double>(exact::p_hat(ep)), cutoff_p_hat(kDefault), 1e-15);
  EXPECT_NEAR(static_cast<double>(exact::p_tilde(ep)), cutoff_p_tilde(kDefault), 1e-15);
  EXPECT_NEAR(static_cast<double>(exact::p_bar(ep)), cutoff_p_bar(kDefault), 1e-15);
  for (int n : {1, 3, 9}) {
    EXPECT_NEAR(static_cast<double>(exact::p_star_n(ep, n)), cutoff_p_star_n(kDefault, n), 1e-15);
    EXPECT_NEAR(static_cast<double>(exact::p_hat_n(ep, n)), cutoff_p_hat_n(kDefault, n), 1e-15);
  }
}

TEST(OnePlayer, ValueMatchesDirectSummation) {
  EXPECT_EQ(one_player_value(0.2, kDefault), 0.0);
  EXPECT_NEAR(one_player_value(1.0 - 1e-15, kDefault), kDefault.g(), 1e-9);
  // cutoff policy: 7 experiments from 0.6 absent success, R forever after one
  const double l = 0.2, d = 0.9, c = 1, m = 10, g = 1, p = 0.6;
  double v = 0, fail = 1;
  for (int t = 0; t < 7; ++t) {
    v += std::pow(d, t) * (1 - d) * (p * fail * l * m - (p * fail + 1 - p) * c);
    v += std::pow(d, t + 1) * p * fail * l * g;
    fail *= 1 - l;
  }
  EXPECT_NEAR(one_player_value(0.6, kDefault), v, 1e-12);
  EXPECT_EQ(one_player_solve(0.6, kDefault, 0.9).experiments, 7);
}

TEST(OnePlayer, ValueIterationSwitchesAtPStar) {
  const GridSolution s = one_player_value_iteration(kDefault, 0.9, 1e-4);
  EXPECT_NEAR(s.switch_belief, cutoff_p_star(kDefault), s.step);
  const GridSolution s2 = one_player_value_iteration(kDefault, std::sqrt(0.9), 1e-4);
  EXPECT_NEAR(s2.switch_belief, cutoff_p_star_social(kDefault), s2.step);
}

TEST(ThoughtExperiments, RootsAtCutoffs) {
  EXPECT_NEAR(thought1_payoff(cutoff_p_hat(kDefault), kDefault), 0.0, 1e-12);
  for (int n : {0, 2, 5}) {
    EXPECT_NEAR(thought2_payoff(cutoff_p_star_n(kDefault, n), n, kDefault), 0.0, 1e-12);
    EXPECT_NEAR(thought1_variant_payoff(cutoff_p_hat_n(kDefault, n), n, kDefault), 0.0, 1e-12);
  }
  double prev = thought1_payoff(0.0, kDefault);
  for (double p = 0.05; p < 1; p += 0.05) {
    const double v = thought1_payoff(p, kDefault);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(X0, SolvesTheFixedPointEquation) {
  const double x = solve_x0(1e-15);
  EXPECT_NEAR(x + std::exp(-2 * x), 1.0, 1e-12);
  EXPECT_NEAR(x, 0.7968, 5e-5);
}
