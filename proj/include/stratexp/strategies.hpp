#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stratexp/params.hpp"
#include "stratexp/profile.hpp"

namespace stratexp {

using ProfilePtr = std::shared_ptr<const StrategyProfile>;

// Follows a fixed action script, then S. Any departure from the script
// (including S beyond its end being broken) switches everybody to R.
class ScriptProfile : public StrategyProfile {
 public:
  ScriptProfile(std::string name, std::vector<Action> script);
  std::string name() const override { return name_; }
  std::string parameters() const override;
  double prob_risky(const NodeContext& ctx) const override;
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override;
  const std::vector<Action>& script() const { return script_; }

 private:
  bool on_script(const std::vector<Action>& h) const;
  std::string name_;
  std::vector<Action> script_;
};

// Both players experiment N* + n times in a row, then stop; R off path.
ProfilePtr make_sigma_n(const ModelParams& params, int n);
// The same profile written from its verbal definition, kept separate so the
// two can be compared.
ProfilePtr make_sigma0(const ModelParams& params);

// R iff the active player's belief is at least p-hat.
ProfilePtr make_threshold_phat(const ModelParams& params);

ProfilePtr make_example_622(const ModelParams& params);
ProfilePtr make_remark6(const ModelParams& params);

// Mixed reasonable equilibrium with its two randomization probabilities.
class MixedExampleProfile;
std::shared_ptr<const MixedExampleProfile> make_mixed_example(
    const ModelParams& params);

class PublicMarkovProfile;
std::shared_ptr<const PublicMarkovProfile> make_public_markov(
    const ModelParams& params);

class AppendixBProfile;
std::shared_ptr<const AppendixBProfile> make_appendixB_SE(
    const ModelParams& params);

// Pure public-game SPEs: the experimentation budget N* is shared out, with
// `leader` (0 or 1) taking the first experiment.
ProfilePtr make_public_budget(const ModelParams& params, int leader);

class MixedExampleProfile : public StrategyProfile {
 public:
  MixedExampleProfile(const ModelParams& params, double alpha, double beta);
  std::string name() const override { return "mixed_example"; }
  std::string parameters() const override;
  bool is_pure() const override { return false; }
  double prob_risky(const NodeContext& ctx) const override;
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override;
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double residual() const { return residual_; }

  // Closed-form alpha; throws HypothesisViolated naming the failed condition.
  static void check_hypotheses(const ModelParams& params);
  static double alpha_formula(const ModelParams& params);
  // Player 1's value of R at RS minus his value of S, for a given beta.
  static double indifference_gap(const ModelParams& params, double alpha,
                                 double beta);

 private:
  friend std::shared_ptr<const MixedExampleProfile> make_mixed_example(
      const ModelParams&);
  double alpha_, beta_;
  double residual_ = 0.0;
};

class PublicMarkovProfile : public StrategyProfile {
 public:
  struct Rung {
    double p = 0, f = 0, gamma1 = 0, gamma2 = 0;
  };
  explicit PublicMarkovProfile(const ModelParams& params);
  std::string name() const override { return "public_markov"; }
  bool is_pure() const override;
  double prob_risky(const NodeContext& ctx) const override;
  bool repeats_after_two_safe(const NodeContext&) const override { return true; }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override;

  // Rung k holds the public belief after k failed experiments.
  const std::vector<Rung>& ladder() const { return ladder_; }
  double f_at(int n_e) const;
  // gamma1 - delta * gamma2 on rung k, with gamma2 from the recursion at f.
  double residual(int k) const;

 private:
  ModelParams params_;
  std::vector<Rung> ladder_;
};

class AppendixBProfile : public StrategyProfile {
 public:
  AppendixBProfile(const ModelParams& params, std::vector<double> gamma_r);
  std::string name() const override { return "appendixB_SE"; }
  std::string parameters() const override;
  BeliefMode belief_mode() const override { return BeliefMode::kAppendixB; }
  double prob_risky(const NodeContext& ctx) const override;
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override;

  const std::vector<double>& gamma_r() const { return gamma_r_; }
  int r0() const { return r0_; }
  bool roles_switch() const { return switch_; }
  void set_roles_switch(bool s) { switch_ = s; }

 private:
  double canonical_prob(const NodeContext& ctx) const;
  double rooted_prob(const NodeContext& ctx) const;
  ModelParams params_;
  std::vector<double> gamma_r_;
  std::vector<bool> wait_;
  int n_star_;
  int r0_ = 0;
  bool switch_ = true;
};

// Scenario profile whose player-2 payoff is gamma_r.
ProfilePtr make_gamma_r_scenario(const ModelParams& params, int r);

// "name" or "name:key=value,key=value".
ProfilePtr make_profile(const std::string& spec, const ModelParams& params);
std::vector<std::string> catalog_names();

}  // namespace stratexp
