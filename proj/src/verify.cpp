#include "stratexp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>

#include <json.hpp>

#include "stratexp/closed_forms.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/game_tree.hpp"

namespace stratexp {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string shown(const std::string& h) { return h.empty() ? "∅" : h; }

int n_star_of(const ModelParams& params) {
  return first_index_below(params.p0(), cutoff_p_star(params), params).n;
}

}  // namespace

void DeviationReport::write_csv(std::ostream& os) const {
  os << "# format: stratexp/deviations/v1 profile=" << profile << " params=" << params
     << " mode=" << to_string(mode) << " depth=" << depth << "\n";
  os << "history,player,eq_value,dev_value,gain,verdict\n";
  for (const auto& n : nodes) {
    os << shown(n.history) << ',' << n.player << ',' << num(n.eq_value) << ','
       << num(n.dev_value) << ',' << num(n.gain) << ',' << (n.pass ? "PASS" : "FAIL")
       << "\n";
  }
}

std::string DeviationReport::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "stratexp/deviations/v1";
  j["profile"] = profile;
  j["params"] = params;
  j["mode"] = to_string(mode);
  j["depth"] = depth;
  j["verdict"] = pass ? "PASS" : "FAIL";
  j["max_gain"] = max_gain;
  j["checked_nodes"] = nodes.size();
  if (first_failure) {
    j["first_failure"] = {{"history", shown(first_failure->history)},
                          {"player", first_failure->player},
                          {"deviation", std::string(1, action_char(first_failure->deviation))},
                          {"gain", first_failure->gain}};
  }
  auto& arr = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : nodes) {
    arr.push_back({{"history", shown(n.history)},
                   {"player", n.player},
                   {"prob_R", n.prob_risky},
                   {"deviation", std::string(1, action_char(n.deviation))},
                   {"eq_value", n.eq_value},
                   {"dev_value", n.dev_value},
                   {"gain", n.gain},
                   {"verdict", n.pass ? "PASS" : "FAIL"}});
  }
  return j.dump(2);
}

DeviationReport one_shot_deviation_check(const ModelParams& params,
                                         ProfilePtr profile,
                                         const OneShotOptions& opts) {
  const BeliefMode mode = opts.mode.value_or(profile->belief_mode());
  GameTree tree(params, profile, mode);
  Evaluator ev(tree, opts.eval);
  DeviationReport rep;
  rep.profile = profile->name();
  rep.params = params.to_string();
  rep.mode = mode;
  rep.depth = opts.depth;

  std::deque<NodeId> queue{tree.root()};
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    if (tree.depth(n) < opts.depth) {
      queue.push_back(tree.child(n, Action::kSafe));
      queue.push_back(tree.child(n, Action::kRisky));
    }
    NodeCheck c;
    c.history = tree.history_string(n);
    c.player = tree.counters(n).active_player() + 1;
    c.prob_risky = tree.prob_risky(n);
    const double v_r = ev.action_value(n, Action::kRisky);
    const double v_s = ev.action_value(n, Action::kSafe);
    c.eq_value = c.prob_risky * v_r + (1 - c.prob_risky) * v_s;
    c.mixed = c.prob_risky > 0.0 && c.prob_risky < 1.0;
    if (c.mixed) {
      // every action in the support must be optimal
      c.deviation = v_r > v_s ? Action::kRisky : Action::kSafe;
      c.dev_value = std::max(v_r, v_s);
      c.gain = c.dev_value - c.eq_value;
      c.pass = std::abs(v_r - v_s) <= opts.tol_mixed;
    } else {
      c.deviation = c.prob_risky == 1.0 ? Action::kSafe : Action::kRisky;
      c.dev_value = c.deviation == Action::kRisky ? v_r : v_s;
      c.gain = c.dev_value - c.eq_value;
      c.pass = c.gain <= opts.tol_pure;
    }
    rep.max_gain = std::max(rep.max_gain, c.gain);
    if (!c.pass) {
      rep.pass = false;
      if (!rep.first_failure) rep.first_failure = c;
    }
    rep.nodes.push_back(std::move(c));
  }
  return rep;
}

// --- sigma_n Nash check ----------------------------------------------------

namespace {

class SigmaNDeviation : public StrategyProfile {
 public:
  SigmaNDeviation(int script_len, int deviator, int period, int plan)
      : script_len_(script_len),
        deviator_(deviator),
        dev_pos_(2 * (period - 1) + deviator),
        plan_(plan) {}
  std::string name() const override { return "sigma_n_deviation"; }
  double prob_risky(const NodeContext& ctx) const override {
    switch (phase(ctx)) {
      case Phase::kScript:
        return static_cast<int>(ctx.actions().size()) < script_len_ ? 1.0 : 0.0;
      case Phase::kDeviationNode:
        return 0.0;
      case Phase::kOffPath:
        return 1.0;
      case Phase::kAfterDeviation:
        if (ctx.active_player() != deviator_) return 1.0;
        return own_moves_after(ctx) <= plan_ ? 1.0 : 0.0;
    }
    return 1.0;
  }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override {
    const int j = other_player(deviator_);
    switch (phase(ctx)) {
      case Phase::kScript:
        if (static_cast<int>(ctx.actions().size()) < script_len_) return false;
        for (int i = 0; i < 2; ++i) {
          if (!q.successful[i] && q.action[i] != Action::kSafe) return false;
        }
        return true;
      case Phase::kDeviationNode:
        return false;
      case Phase::kOffPath:
        return q.action[0] == Action::kRisky && q.action[1] == Action::kRisky;
      case Phase::kAfterDeviation: {
        if (own_moves_after(ctx) <= plan_ + 1) return false;
        if (q.action[j] != Action::kRisky) return false;
        const Action want = q.successful[deviator_] ? Action::kRisky : Action::kSafe;
        return q.action[deviator_] == want;
      }
    }
    return false;
  }

 private:
  enum class Phase { kScript, kDeviationNode, kOffPath, kAfterDeviation };
  Phase phase(const NodeContext& ctx) const {
    const auto& h = ctx.actions();
    const int len = static_cast<int>(h.size());
    for (int t = 0; t < std::min(len, dev_pos_); ++t) {
      if (h[t] != Action::kRisky) return Phase::kOffPath;
    }
    if (len < dev_pos_) return Phase::kScript;
    if (len == dev_pos_) return Phase::kDeviationNode;
    if (h[dev_pos_] == Action::kSafe) return Phase::kAfterDeviation;
    // the deviator skipped his deviation: back on the script until it ends
    for (int t = dev_pos_; t < len; ++t) {
      const Action want = t < script_len_ ? Action::kRisky : Action::kSafe;
      if (h[t] != want) return Phase::kOffPath;
    }
    return Phase::kScript;
  }
  // Deviator moves strictly after the deviation, counting the current one.
  int own_moves_after(const NodeContext& ctx) const {
    return (static_cast<int>(ctx.actions().size()) - dev_pos_) / 2;
  }
  int script_len_;
  int deviator_;
  int dev_pos_;
  int plan_;
};

}  // namespace

ProfilePtr make_sigma_n_deviation(const ModelParams& params, int n, int deviator,
                                  int period) {
  const int ns = n_star_of(params);
  if (period < 1 || period > ns + n) throw InvalidParams("deviation period out of range");
  const double belief = phi_iterate(params.p0(), period - 1, params);
  const int plan = one_player_solve(belief, params, params.delta()).experiments;
  return std::make_shared<SigmaNDeviation>(2 * (ns + n), deviator, period, plan);
}

NashCheck nash_check_sigma_n(const ModelParams& params, int n) {
  auto sigma = make_sigma_n(params, n);  // throws PriorTooLow
  NashCheck out;
  out.cp1 = cp1_sigma_n(params, n);
  out.cp2 = cp2_sigma_n(params, n);
  out.closed_form = out.cp1 >= 0.0;
  GameTree base_tree(params, sigma);
  Evaluator base(base_tree);
  const int ns = n_star_of(params);
  out.best_gain = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2; ++i) {
    for (int t = 1; t <= ns + n; ++t) {
      // Play agrees up to the deviation node, so compare there: measured from
      // the root the gain carries a factor delta^t that can underflow.
      const std::vector<Action> h(2 * (t - 1) + i, Action::kRisky);
      const NodeId at = base_tree.find(h);
      const PlayerBelief b = base_tree.belief(at, i);
      GameTree dev_tree(params, make_sigma_n_deviation(params, n, i, t));
      Evaluator dev(dev_tree);
      const double gain = dev.continuation_value(dev_tree.find(h), i, b) -
                          base.continuation_value(at, i, b);
      if (gain > out.best_gain) {
        out.best_gain = gain;
        out.best_player = i + 1;
        out.best_period = t;
      }
    }
  }
  if (ns + n == 0) out.best_gain = 0.0;
  out.brute_force = out.best_gain <= 1e-13;
  return out;
}

// --- support and belief checks on equilibria -------------------------------

Theorem4Report check_theorem4(const ModelParams& params, ProfilePtr profile,
                              int depth) {
  OneShotOptions o;
  o.depth = depth;
  DeviationReport dr = one_shot_deviation_check(params, profile, o);
  if (!dr.pass) {
    throw NotAnEquilibrium(profile->name() + " fails the one-shot check at " +
                           shown(dr.first_failure->history));
  }
  const double ph = cutoff_p_hat(params);
  GameTree tree(params, profile);
  Evaluator ev(tree);
  Theorem4Report rep;

  std::deque<NodeId> queue{tree.root()};
  while (!queue.empty()) {
    const NodeId n = queue.front();
    queue.pop_front();
    if (tree.depth(n) < depth) {
      queue.push_back(tree.child(n, Action::kSafe));
      queue.push_back(tree.child(n, Action::kRisky));
    }
    const PlayerBelief& b = tree.belief(n, tree.counters(n).active_player());
    if (!b.p.is_certain() && b.p.value() < ph - kGenericityBand &&
        tree.prob_risky(n) > 0.0) {
      rep.no_risky_below_p_hat = false;
      rep.violations.push_back(shown(tree.history_string(n)));
    }
  }

  // terminal beliefs along positive-probability plays in state B
  std::deque<NodeId> path{tree.root()};
  while (!path.empty()) {
    const NodeId n = path.front();
    path.pop_front();
    if (auto acts = ev.settled_actions(n, latent::kBad)) {
      if ((*acts)[0] == Action::kSafe && (*acts)[1] == Action::kSafe) {
        const double a = tree.belief(n, 0).p.value();
        const double b = tree.belief(n, 1).p.value();
        rep.terminal_beliefs.push_back(a);
        rep.terminal_beliefs.push_back(b);
        if (a < ph || b < ph) rep.terminal_below_p_hat = true;
      }
      continue;
    }
    if (tree.depth(n) >= 200) continue;
    const double x = tree.prob_risky(n);
    if (x > 0.0) path.push_back(tree.child(n, Action::kRisky));
    if (x < 1.0) path.push_back(tree.child(n, Action::kSafe));
  }
  rep.ne_given_bad = ev.ne_given_bad(tree.root());
  return rep;
}

Theorem6Report check_theorem6_bounds(const ModelParams& params, ProfilePtr profile,
                                     int verify_depth) {
  if (!profile->is_pure()) throw InvalidParams("support bounds need a pure profile");
  if (verify_depth > 0) {
    OneShotOptions o;
    o.depth = verify_depth;
    DeviationReport dr = one_shot_deviation_check(params, profile, o);
    if (!dr.pass) {
      throw NotAnEquilibrium(profile->name() + " fails the one-shot check at " +
                             shown(dr.first_failure->history));
    }
  }
  Theorem6Report rep;
  rep.n_star_social = compute_cutoffs(params, 0).N_star_social;
  const PayoffReport pr = eval_profile(params, profile);
  for (const auto& [k, w] : pr.ne_given_bad) {
    if (w <= 0.0) continue;
    rep.support.push_back(k);
    if (k == kNeverSettles) {
      rep.upper_ok = false;
      continue;
    }
    if (k < rep.n_star_social - 2) rep.lower_ok = false;
    if (k > 2 * rep.n_star_social) rep.upper_ok = false;
  }
  return rep;
}

Prop6Certificate prop6_certificate(const ModelParams& params) {
  Prop6Certificate out;
  const double ph = cutoff_p_hat(params);
  out.interval_lo = phi_inverse(ph, params);
  out.interval_hi = cutoff_p_star_n(params, 1);
  if (!(out.interval_lo < cutoff_p_star(params))) {
    throw HypothesisViolated("phi^-1(p_hat) is not below p*");
  }
  if (!(out.interval_lo < out.interval_hi)) {
    throw HypothesisViolated("the interval (phi^-1(p_hat), p*_1) is empty");
  }
  if (!(params.p0() > out.interval_lo && params.p0() < out.interval_hi)) {
    throw HypothesisViolated("p0 lies outside (phi^-1(p_hat), p*_1)");
  }
  // Forced shapes: S forever after RS, and after RS.RR.S.
  auto stay = std::make_shared<ScriptProfile>("forced", parse_actions("RS"));
  auto push = std::make_shared<ScriptProfile>("forced", parse_actions("RSRR"));
  GameTree t_stay(params, stay), t_push(params, push);
  Evaluator e_stay(t_stay), e_push(t_push);
  PlayerBelief b;
  b.p = Belief::from_probability(phi(params.p0(), params));
  b.q = 0.0;
  const double v_s = e_stay.action_value(t_stay.find("RS"), Action::kSafe, b);
  const double v_r = e_push.action_value(t_push.find("RS"), Action::kRisky, b);
  out.gain = v_r - v_s;
  out.thought1 = thought1_payoff(b.p.value(), params);
  return out;
}

int classify_622_case(const std::vector<Action>& h, const HistoryCounters& c) {
  const std::size_t len = h.size();
  auto ends_with = [&](const char* s) {
    const std::size_t k = std::char_traits<char>::length(s);
    if (len < k) return false;
    for (std::size_t i = 0; i < k; ++i) {
      if (action_char(h[len - k + i]) != s[i]) return false;
    }
    return true;
  };
  std::size_t lead = 0;
  while (lead < len && h[lead] == Action::kSafe) ++lead;
  if (lead == len) return 1;
  if (lead + 1 == len) return 2;
  if (ends_with("SSR") && c.n_e() >= 2) return 6;
  if (ends_with("SS") && c.n_e() >= 1) return 3;
  if (ends_with("RS")) return 4;
  if (ends_with("RR")) return 5;
  return 0;
}

}  // namespace stratexp
