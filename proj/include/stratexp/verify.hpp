#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stratexp/evaluator.hpp"
#include "stratexp/strategies.hpp"

namespace stratexp {

struct NodeCheck {
  std::string history;
  int player = 1;  // 1 or 2
  double prob_risky = 0.0;
  Action deviation = Action::kSafe;
  double eq_value = 0.0;
  double dev_value = 0.0;
  double gain = 0.0;
  bool mixed = false;
  bool pass = true;
};

struct DeviationReport {
  std::string profile;
  std::string params;
  BeliefMode mode = BeliefMode::kReasonable;
  int depth = 0;
  std::vector<NodeCheck> nodes;  // sorted by length, then S before R
  double max_gain = 0.0;
  bool pass = true;
  std::optional<NodeCheck> first_failure;

  void write_csv(std::ostream& os) const;
  std::string to_json() const;
};

struct OneShotOptions {
  int depth = 8;
  std::optional<BeliefMode> mode;  // default: the profile's own
  double tol_pure = 1e-9;
  double tol_mixed = 1e-8;
  EvalOptions eval;
};

DeviationReport one_shot_deviation_check(const ModelParams& params,
                                         ProfilePtr profile,
                                         const OneShotOptions& opts = {});

struct NashCheck {
  bool closed_form = false;
  bool brute_force = false;
  double cp1 = 0.0, cp2 = 0.0;
  double best_gain = 0.0;  // most profitable deviation found
  int best_player = 0, best_period = 0;
};
NashCheck nash_check_sigma_n(const ModelParams& params, int n);

// Deviator (0 or 1) follows sigma_n until his own period `period` (1-based),
// plays S there, then runs the single-agent cutoff policy on his own
// experiments.
ProfilePtr make_sigma_n_deviation(const ModelParams& params, int n, int deviator,
                                  int period);

struct Theorem4Report {
  bool terminal_below_p_hat = false;  // (a) some player ends below p_hat
  bool no_risky_below_p_hat = true;   // (b)
  std::vector<std::string> violations;
  std::vector<double> terminal_beliefs;
  std::map<int, double> ne_given_bad;
  bool pass() const { return terminal_below_p_hat && no_risky_below_p_hat; }
};
// Runs the one-shot check first and throws NotAnEquilibrium on failure.
Theorem4Report check_theorem4(const ModelParams& params, ProfilePtr profile,
                              int depth);

struct Theorem6Report {
  int n_star_social = 0;
  std::vector<int> support;
  bool lower_ok = true, upper_ok = true;
  bool pass() const { return lower_ok && upper_ok; }
};
// verify_depth > 0 runs the one-shot check first (NotAnEquilibrium).
Theorem6Report check_theorem6_bounds(const ModelParams& params, ProfilePtr profile,
                                     int verify_depth = 0);

struct Prop6Certificate {
  double gain = 0.0;           // from the evaluator on the forced paths
  double thought1 = 0.0;       // first thought experiment at phi(p0)
  double interval_lo = 0.0, interval_hi = 0.0;
};
Prop6Certificate prop6_certificate(const ModelParams& params);

// Which of the six cases of the 622 argument a history with an unconvinced
// active player falls into; 0 when none applies.
int classify_622_case(const std::vector<Action>& h, const HistoryCounters& c);

}  // namespace stratexp
