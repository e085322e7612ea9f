#pragma once

#include <vector>

#include "stratexp/params.hpp"

namespace stratexp {

// Single-agent bandit with discount `dp`, solved exactly on the belief
// ladder p, phi(p), phi^2(p), ... Experiments stop at the first rung where
// stopping is optimal.
struct OnePlayerSolution {
  double value = 0.0;
  int experiments = 0;  // planned experiments absent a success
};
OnePlayerSolution one_player_solve(double p, const ModelParams& params,
                                   double dp);
double one_player_value(double p, const ModelParams& params, double dp);
double one_player_value(double p, const ModelParams& params);

// Value iteration on a uniform belief grid, as an independent check of the
// ladder solution. The switch belief is the smallest grid point where
// experimenting is strictly better than stopping.
struct GridSolution {
  std::vector<double> value;
  double step = 0.0;
  double switch_belief = 1.0;
  int sweeps = 0;
};
GridSolution one_player_value_iteration(const ModelParams& params, double dp,
                                        double step, double tol = 1e-12);

// Continuation payoffs of player 1 after (RR)^N* and of player 2 after
// (RR)^N* R under sigma_n, at the common belief phi^N*(p0).
double cp1_sigma_n(const ModelParams& params, int n);
double cp2_sigma_n(const ModelParams& params, int n);

// R minus S payoffs of the thought experiments; their roots are p_hat,
// p_hat_n and p*_n.
double thought1_payoff(double p, const ModelParams& params);
double thought1_variant_payoff(double p, int n, const ModelParams& params);
double thought2_payoff(double p, int n, const ModelParams& params);

// Continuation payoffs of a player with belief p who assigns q to the other
// player's past success.
struct AppendixD {
  double cps;     // choose S, the other reveals
  double ctnK1;   // k + 1 own experiments against k of the other
  double ctnK21;  // k own experiments, the other revealed on both sides
  double ctnN;    // k experiments each, then S
};
AppendixD appendixD_payoffs(double p, double q, int k, const ModelParams& params);

// Value of (RR)^k S^inf for a player with belief p facing u_j undisclosed
// experiments of the other.
double rr_then_stop_value(double p, int u_j, int k, const ModelParams& params);
// Value of S (RR)^k S^inf.
double safe_then_rr_value(double p, int u_j, int k, const ModelParams& params);
// Single agent experimenting k times from p, then stopping.
double k_experiments_value(double p, int k, const ModelParams& params);

struct Lemma10 {
  bool prefer_now_vs_delay;   // (RR)^k S^inf over S (RR)^k S^inf
  bool prefer_k_vs_kminus1;   // (RR)^k S^inf over (RR)^{k-1} S^inf
  bool prefer_extra_RS;       // (RR)^k RS S^inf over (RR)^k S^inf
  double diff_now_vs_delay;
  double diff_k_vs_kminus1;
  double diff_extra_RS;
  // Sign of the first difference as an exact criterion: k experiments
  // alone from p pay off.
  bool now_vs_delay_exact;
};
Lemma10 lemma10_criteria(double p, int u_j, int k, const ModelParams& params);

// Positive root of x + exp(-2x) = 1.
double solve_x0(double tol = 1e-14);

}  // namespace stratexp
