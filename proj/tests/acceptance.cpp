// Prints one PASS/FAIL line per acceptance criterion; exit status 0 only when
// all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stratexp/closed_forms.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/experiments.hpp"
#include "stratexp/simulate.hpp"
#include "stratexp/strategies.hpp"
#include "stratexp/verify.hpp"

using namespace stratexp;
using stratexp::testing::path_value;
using stratexp::testing::repeat;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome criterion1() {
  const OrderingReport r = cutoff_ordering_suite(10000, 1);
  std::ostringstream os;
  int total = 0;
  for (const auto& [k, v] : r.violations) total += v;
  os << total << " violations on " << r.points << " points in " << fmt_num(r.seconds)
     << " s; |p*_200 - p_myop| < 1e-4 at " << r.limit_within_at_200
     << " points, limit checked at a converged n";
  return {r.pass() && r.seconds < 10, os.str()};
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2);
  int good = 0;
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const ModelParams pr = sample_params(rng);
    const GridSolution s = one_player_value_iteration(pr, pr.delta(), 1e-5);
    const double gap = std::abs(s.switch_belief - cutoff_p_star(pr));
    worst = std::max(worst, gap);
    good += gap <= s.step;
  }
  const double secs = seconds_since(t0);
  return {good == 100 && secs < 60,
          std::to_string(good) + "/100 within one grid cell (worst gap " + fmt_num(worst) +
              ") in " + fmt_num(secs) + " s"};
}

Outcome criterion3() {
  std::mt19937_64 rng(3);
  int agree = 0, cp2_ok = 0, total = 0, nash = 0;
  while (total < 500) {
    const double lam = uniform(rng, 0.05, 0.9), d = uniform(rng, 0.5, 0.99);
    const double m = (1.0 + uniform(rng, 0.2, 8.0)) / lam;
    const ModelParams base(lam, d, 1.0, m, 0.5);
    const double ps = cutoff_p_star(base);
    if (ps > 0.9) continue;
    const ModelParams pr = base.with_p0(uniform(rng, ps, 0.95));
    if (compute_cutoffs(pr, 0).genericity_flag) continue;
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    const NashCheck r = nash_check_sigma_n(pr, n);
    ++total;
    agree += r.closed_form == r.brute_force;
    cp2_ok += r.cp2 >= r.cp1;
    nash += r.closed_form;
  }
  return {agree == total && cp2_ok == total,
          std::to_string(agree) + "/" + std::to_string(total) + " agree (" +
              std::to_string(nash) + " Nash), CP2 >= CP1 at " + std::to_string(cp2_ok)};
}

Outcome criterion4() {
  const TargetResult ratio = reproduce("prop2-ratio");
  const TargetResult pf = reproduce("prop2-pf");
  const double x0 = solve_x0(1e-15);
  const double residual = x0 + std::exp(-2 * x0) - 1;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x0);
  const bool x0_ok = std::abs(residual) < 1e-10 && std::string(buf) == "0.7968";
  std::ostringstream os;
  os << "N_e/N** = " << fmt_num(ratio.numbers.at("ratio")) << " (worst point "
     << fmt_num(ratio.numbers.at("seconds")) << " s), p_f/p* = "
     << fmt_num(pf.numbers.at("ratio")) << ", x0 = " << buf << "...";
  return {ratio.pass && pf.pass && x0_ok, os.str()};
}

Outcome criterion5() {
  const TargetResult r = reproduce("thm5-grid");
  return {r.pass, r.summary};
}

Outcome criterion6() {
  const TargetResult r = reproduce("thm6-bounds");
  return {r.pass, r.summary};
}

Outcome criterion7() {
  int checked = 0, passed = 0;
  bool ne_ok = true;
  for (const auto& [lam, d, m] : std::vector<std::tuple<double, double, double>>{
           {0.9, 0.5, 3.0}, {0.8, 0.5, 3.0}, {0.9, 0.4, 2.5}}) {
    const ModelParams base(lam, d, 1.0, m, 0.5);
    const double lo = cutoff_p_star_n(base, 1);
    const double hi = phi_inverse(cutoff_p_hat(base), base);
    if (!(lo < hi)) continue;
    for (double f : {0.0, 0.25, 0.5, 0.75, 0.999}) {
      const ModelParams pr = base.with_p0(lo + f * (hi - lo));
      const CutoffSet cs = compute_cutoffs(pr, 0);
      OneShotOptions o;
      o.depth = 2 * (cs.N_hat + 3);
      auto prof = make_example_622(pr);
      const DeviationReport r = one_shot_deviation_check(pr, prof, o);
      ++checked;
      passed += r.pass;
      const PayoffReport ev = eval_profile(pr, prof);
      ne_ok = ne_ok && cs.N_star == 1 && ev.ne_given_bad.size() == 1 &&
              ev.ne_given_bad.begin()->first == 2;
    }
  }
  return {checked > 0 && passed == checked && ne_ok,
          std::to_string(passed) + "/" + std::to_string(checked) +
              " one-shot PASS at p0 in [p*_1, phi^-1(p_hat)]; N_e = 2 with N* = 1: " +
              (ne_ok ? "yes" : "no")};
}

Outcome criterion8() {
  const TargetResult r = reproduce("mixed-example");
  return {r.pass, r.summary};
}

Outcome criterion9() {
  const TargetResult r = reproduce("public-markov");
  return {r.pass, r.summary};
}

Outcome criterion10() {
  const auto t0 = Clock::now();
  // Monte Carlo against the exact evaluator
  struct Case {
    std::string profile;
    ModelParams params;
  };
  const std::vector<Case> cases{
      {"sigma_n:n=2", ModelParams(0.2, 0.9, 1, 10, 0.6)},
      {"threshold_phat", ModelParams(0.6, 0.6, 1, 5, 0.5)},
      {"example_622", ModelParams(0.9, 0.5, 1, 3, 0.5)},
      {"remark6", ModelParams(0.9, 0.85, 1, 2, 0.3)},
      {"mixed_example", ModelParams(0.3, 0.9, 1, 5, 0.38)},
      {"public_markov", ModelParams(0.2, 0.9, 1, 10, 0.6)},
      {"appendixB_SE", ModelParams(0.2, 0.9, 1, 10, 0.6)},
  };
  int mc_ok = 0;
  double worst_z = 0;
  for (const auto& cs : cases) {
    auto prof = make_profile(cs.profile, cs.params);
    const PayoffReport ex = eval_profile(cs.params, prof);
    SimConfig cfg;
    cfg.runs = 100000;
    cfg.seed = 10;
    const SimResult sim = run_sim(cs.params, prof, cfg);
    bool ok = true;
    for (int i = 0; i < 2; ++i) {
      const double se = std::max(sim.gamma[i].stderr_, 1e-12);
      const double z = std::abs(sim.gamma[i].mean - ex.gamma[i]) / se;
      worst_z = std::max(worst_z, z);
      ok = ok && z < 4;
    }
    mc_ok += ok;
  }

  // closed forms against the exact evaluator
  std::mt19937_64 rng(1010);
  int cf_ok = 0, points = 0;
  double worst = 0;
  while (points < 1000) {
    const double lam = uniform(rng, 0.05, 0.9), d = uniform(rng, 0.3, 0.97);
    const double m = (1.0 + uniform(rng, 0.2, 8.0)) / lam;
    const ModelParams pr(lam, d, 1.0, m, uniform(rng, 0.05, 0.95));
    const double p = uniform(rng, 0.02, 0.98), q = uniform(rng, 0.0, 0.95);
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    const int uj = std::uniform_int_distribution<int>(0, 4)(rng);
    const double quj = 1 - std::pow(1 - lam, uj);
    std::vector<double> diffs;
    const AppendixD ad = appendixD_payoffs(p, q, k, pr);
    diffs.push_back(ad.cps - path_value(pr, "SS", p, q));
    diffs.push_back(ad.ctnK1 - path_value(pr, repeat("R", 2 * k + 1) + "S", p, q));
    diffs.push_back(ad.ctnK21 - path_value(pr, repeat("R", 2 * k) + "S", p, 0.0));
    diffs.push_back(ad.ctnN - path_value(pr, repeat("R", 2 * k) + "S", p, q));
    const Lemma10 l10 = lemma10_criteria(p, uj, k, pr);
    const double vk = path_value(pr, repeat("R", 2 * k) + "S", p, quj);
    const double vdelay = path_value(pr, "S" + repeat("R", 2 * k) + "S", p, quj);
    const double vk1 = path_value(pr, repeat("R", 2 * k - 2) + "S", p, quj);
    const double vrs = path_value(pr, repeat("R", 2 * k + 1) + "S", p, quj);
    diffs.push_back(l10.diff_now_vs_delay - (vk - vdelay));
    diffs.push_back(l10.diff_k_vs_kminus1 - (vk - vk1));
    diffs.push_back(l10.diff_extra_RS - (vrs - vk));
    // CP1 at (RR)^N* under sigma_n
    const CutoffSet cs = compute_cutoffs(pr, 0);
    if (pr.p0() >= cs.p_star && cs.N_star <= 40) {
      const int n = std::uniform_int_distribution<int>(0, 4)(rng);
      GameTree tree(pr, make_sigma_n(pr, n));
      Evaluator ev(tree);
      const NodeId at = tree.find(repeat("RR", cs.N_star));
      diffs.push_back(cp1_sigma_n(pr, n) - ev.continuation_value(at, 0));
      // with n = 0 player 1's extra R is off path
      if (n > 0) {
        diffs.push_back(cp2_sigma_n(pr, n) -
                        ev.continuation_value(tree.find(repeat("RR", cs.N_star) + "R"), 1));
      }
    }
    double mx = 0;
    for (double x : diffs) mx = std::max(mx, std::abs(x));
    worst = std::max(worst, mx);
    cf_ok += mx < 1e-10;
    ++points;
  }
  std::ostringstream os;
  os << "MC within 4 stderr for " << mc_ok << "/" << cases.size() << " profiles (max z "
     << fmt_num(worst_z) << "); closed forms within 1e-10 at " << cf_ok << "/" << points
     << " points (max gap " << fmt_num(worst) << ") in " << fmt_num(seconds_since(t0)) << " s";
  return {mc_ok == static_cast<int>(cases.size()) && cf_ok == points, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
