#include "stratexp/evaluator.hpp"

#include <cmath>
#include <limits>

#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"

namespace stratexp {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
constexpr unsigned char kUnknown = 0;
constexpr unsigned char kUnsettled = 1;

int default_settle_depth(const ModelParams& params) {
  CutoffSet cs = compute_cutoffs(params, 0);
  return 2 * (cs.N_tilde + cs.N_star + 4);
}

void add_scaled(std::map<int, double>& into, const std::map<int, double>& from,
                double w) {
  if (w == 0.0) return;
  for (const auto& [k, v] : from) into[k] += w * v;
}

}  // namespace

Evaluator::Evaluator(GameTree& tree, EvalOptions opts)
    : tree_(tree), opts_(opts) {
  settle_depth_ = opts_.settle_depth >= 0
                      ? opts_.settle_depth
                      : default_settle_depth(tree_.params()) +
                            tree_.profile().horizon_hint();
  if (settle_depth_ > opts_.depth_cap) settle_depth_ = opts_.depth_cap;
}

std::array<double, 2>& Evaluator::memo(NodeId n, int l) {
  const std::size_t idx = static_cast<std::size_t>(n) * 5 + l;
  if (memo_.size() <= idx) {
    memo_.resize(std::max(idx + 1, memo_.size() * 2), {kUnset, kUnset});
  }
  return memo_[idx];
}

double Evaluator::prob_risky(NodeId n, int l) {
  const int k = tree_.counters(n).active_player();
  if (latent::successful(l, k)) {
    if (!opts_.successful_may_play_safe) return 1.0;
    return tree_.profile().prob_risky_if_successful(NodeContext(tree_, n));
  }
  return tree_.prob_risky(n);
}

double Evaluator::tail_value(Action a, int l) const {
  if (a == Action::kSafe) return 0.0;
  return latent::good(l) ? tree_.params().g() : -tree_.params().c();
}

std::optional<std::array<Action, 2>> Evaluator::settled_actions(NodeId n,
                                                               int l) {
  const std::size_t idx =
      static_cast<std::size_t>(n) * 4 + latent::pattern(l);
  if (settle_cache_.size() <= idx) {
    settle_cache_.resize(std::max(idx + 1, settle_cache_.size() * 2), kUnknown);
  }
  if (settle_cache_[idx] == kUnsettled) return std::nullopt;
  if (settle_cache_[idx] >= 2) {
    const int bits = settle_cache_[idx] - 2;
    return std::array<Action, 2>{static_cast<Action>(bits & 1),
                                 static_cast<Action>((bits >> 1) & 1)};
  }

  auto give_up = [&]() -> std::optional<std::array<Action, 2>> {
    settle_cache_[idx] = kUnsettled;
    return std::nullopt;
  };

  int seen[2] = {-1, -1};
  NodeId cur = n;
  for (int step = 0; step < opts_.window; ++step) {
    const int k = tree_.counters(cur).active_player();
    const double x = prob_risky(cur, l);
    if (x != 0.0 && x != 1.0) return give_up();
    const int a = x == 1.0 ? 1 : 0;
    if (seen[k] < 0) {
      seen[k] = a;
    } else if (seen[k] != a) {
      return give_up();
    }
    cur = tree_.child(cur, static_cast<Action>(a));
  }
  if (seen[0] < 0 || seen[1] < 0) return give_up();

  SettleQuery q;
  for (int i = 0; i < 2; ++i) {
    q.successful[i] = latent::successful(l, i);
    q.action[i] = static_cast<Action>(seen[i]);
  }
  std::optional<bool> verdict;
  if (!opts_.successful_may_play_safe) {
    verdict = tree_.profile().settled(NodeContext(tree_, cur), q);
  }
  const bool ok = verdict ? *verdict : tree_.depth(n) >= settle_depth_;
  if (!ok) return give_up();
  settle_cache_[idx] = static_cast<unsigned char>(2 + seen[0] + 2 * seen[1]);
  return q.action;
}

std::array<double, 2> Evaluator::risky_branch(NodeId n, int l) {
  const ModelParams& pr = tree_.params();
  const int k = tree_.counters(n).active_player();
  const int o = other_player(k);
  const NodeId c = tree_.child(n, Action::kRisky);
  std::array<double, 2> v;
  if (latent::good(l) && !latent::successful(l, k)) {
    auto hit = latent_value(c, latent::with_success(l, k));
    auto miss = latent_value(c, l);
    for (int i = 0; i < 2; ++i)
      v[i] = pr.lambda() * hit[i] + (1.0 - pr.lambda()) * miss[i];
  } else {
    v = latent_value(c, l);
  }
  const double flow =
      (1.0 - pr.delta()) *
      ((latent::good(l) ? pr.lambda() * pr.m() : 0.0) - pr.c());
  std::array<double, 2> out;
  out[k] = flow + pr.delta() * v[k];
  out[o] = v[o];
  return out;
}

bool Evaluator::cycle_applies(NodeId n, int l) {
  if (!tree_.profile().repeats_after_two_safe(NodeContext(tree_, n)))
    return false;
  const NodeId s = tree_.child(n, Action::kSafe);
  return prob_risky(s, l) < 1.0;
}

std::array<double, 2> Evaluator::latent_value(NodeId n, int l) {
  {
    const auto& m = memo(n, l);
    if (!std::isnan(m[0])) return m;
  }
  if (tree_.depth(n) >= opts_.depth_cap) {
    throw UnclassifiableTail("no settled continuation by depth " +
                             std::to_string(opts_.depth_cap) + " below " +
                             tree_.history_string(n).substr(0, 60));
  }
  std::array<double, 2> res{0.0, 0.0};
  if (auto acts = settled_actions(n, l)) {
    res = {tail_value((*acts)[0], l), tail_value((*acts)[1], l)};
    memo(n, l) = res;
    return res;
  }

  const double delta = tree_.params().delta();
  const int k = tree_.counters(n).active_player();
  const int o = other_player(k);
  const double x = prob_risky(n, l);

  if (x < 1.0 && cycle_applies(n, l)) {
    // W(h.S.S) = W(h): solve the two-node loop directly.
    const NodeId s = tree_.child(n, Action::kSafe);
    const double y = prob_risky(s, l);
    std::array<double, 2> a{0.0, 0.0}, b{0.0, 0.0};
    if (x > 0.0) {
      auto r = risky_branch(n, l);
      a = {x * r[0], x * r[1]};
    }
    if (y > 0.0) {
      auto r = risky_branch(s, l);
      b = {y * r[0], y * r[1]};
    }
    const double den = 1.0 - (1.0 - x) * (1.0 - y) * delta;
    res[k] = (a[k] + (1.0 - x) * delta * b[k]) / den;
    res[o] = (a[o] + (1.0 - x) * b[o]) / den;
    std::array<double, 2> at_s;
    at_s[o] = b[o] + (1.0 - y) * delta * res[o];
    at_s[k] = b[k] + (1.0 - y) * res[k];
    memo(s, l) = at_s;
    memo(n, l) = res;
    return res;
  }

  if (x > 0.0) {
    auto r = risky_branch(n, l);
    res[0] += x * r[0];
    res[1] += x * r[1];
  }
  if (x < 1.0) {
    auto w = latent_value(tree_.child(n, Action::kSafe), l);
    res[k] += (1.0 - x) * delta * w[k];
    res[o] += (1.0 - x) * w[o];
  }
  memo(n, l) = res;
  return res;
}

std::vector<std::pair<int, double>> Evaluator::weights(
    int player, const PlayerBelief& b) const {
  const int j = other_player(player);
  const int good_other_hit = latent::with_success(latent::kGood, j);
  if (b.p.is_certain()) return {{good_other_hit, 1.0}};
  const double p = b.p.value();
  std::vector<std::pair<int, double>> w;
  if (p < 1.0) w.emplace_back(latent::kBad, 1.0 - p);
  if (p * b.q > 0.0) w.emplace_back(good_other_hit, p * b.q);
  if (p * (1.0 - b.q) > 0.0) w.emplace_back(latent::kGood, p * (1.0 - b.q));
  return w;
}

double Evaluator::continuation_value(NodeId n, int player,
                                     const PlayerBelief& b) {
  double v = 0.0;
  for (const auto& [l, w] : weights(player, b)) v += w * latent_value(n, l)[player];
  return v;
}

double Evaluator::continuation_value(NodeId n, int player) {
  return continuation_value(n, player, tree_.belief(n, player));
}

double Evaluator::action_value(NodeId n, Action a) {
  const int k = tree_.counters(n).active_player();
  return action_value(n, a, tree_.belief(n, k));
}

double Evaluator::action_value(NodeId n, Action a, const PlayerBelief& b) {
  const int k = tree_.counters(n).active_player();
  const double delta = tree_.params().delta();
  double v = 0.0;
  for (const auto& [l, w] : weights(k, b)) {
    double x;
    if (a == Action::kRisky) {
      x = risky_branch(n, l)[k];
    } else {
      x = delta * latent_value(tree_.child(n, Action::kSafe), l)[k];
    }
    v += w * x;
  }
  return v;
}

std::map<int, double> Evaluator::ne_given_bad(NodeId n) {
  if (auto it = ne_memo_.find(n); it != ne_memo_.end()) return it->second;
  if (tree_.depth(n) >= opts_.depth_cap) {
    throw UnclassifiableTail("no settled continuation by depth " +
                             std::to_string(opts_.depth_cap));
  }
  std::map<int, double> out;
  if (auto acts = settled_actions(n, latent::kBad)) {
    const bool stops = (*acts)[0] == Action::kSafe && (*acts)[1] == Action::kSafe;
    out[stops ? tree_.counters(n).n_e() : kNeverSettles] = 1.0;
  } else {
    const double x = tree_.prob_risky(n);
    if (x < 1.0 && cycle_applies(n, latent::kBad)) {
      const NodeId s = tree_.child(n, Action::kSafe);
      const double y = tree_.prob_risky(s);
      const double den = 1.0 - (1.0 - x) * (1.0 - y);
      if (x > 0.0)
        add_scaled(out, ne_given_bad(tree_.child(n, Action::kRisky)), x / den);
      if (y > 0.0)
        add_scaled(out, ne_given_bad(tree_.child(s, Action::kRisky)),
                   (1.0 - x) * y / den);
    } else {
      if (x > 0.0) add_scaled(out, ne_given_bad(tree_.child(n, Action::kRisky)), x);
      if (x < 1.0)
        add_scaled(out, ne_given_bad(tree_.child(n, Action::kSafe)), 1.0 - x);
    }
  }
  ne_memo_[n] = out;
  return out;
}

double Evaluator::discounted_experiments_given_bad(NodeId n, int player) {
  auto key = std::make_pair(n, player);
  if (auto it = exp_memo_.find(key); it != exp_memo_.end()) return it->second;
  if (tree_.depth(n) >= opts_.depth_cap) {
    throw UnclassifiableTail("no settled continuation by depth " +
                             std::to_string(opts_.depth_cap));
  }
  const double delta = tree_.params().delta();
  double out = 0.0;
  if (auto acts = settled_actions(n, latent::kBad)) {
    out = (*acts)[player] == Action::kRisky ? 1.0 / (1.0 - delta) : 0.0;
  } else {
    const bool mine = tree_.counters(n).active_player() == player;
    const double x = tree_.prob_risky(n);
    auto step = [&](NodeId m, bool own) {
      double e = discounted_experiments_given_bad(tree_.child(m, Action::kRisky),
                                                  player);
      return own ? 1.0 + delta * e : e;
    };
    if (x < 1.0 && cycle_applies(n, latent::kBad)) {
      const NodeId s = tree_.child(n, Action::kSafe);
      const double y = tree_.prob_risky(s);
      const double a = x > 0.0 ? x * step(n, mine) : 0.0;
      const double b = y > 0.0 ? y * step(s, !mine) : 0.0;
      // discount applies on the S move of whoever is active
      const double ds_n = mine ? delta : 1.0;
      const double ds_s = mine ? 1.0 : delta;
      out = (a + (1.0 - x) * ds_n * b) /
            (1.0 - (1.0 - x) * (1.0 - y) * ds_n * ds_s);
    } else {
      if (x > 0.0) out += x * step(n, mine);
      if (x < 1.0) {
        out += (1.0 - x) * (mine ? delta : 1.0) *
               discounted_experiments_given_bad(tree_.child(n, Action::kSafe),
                                                player);
      }
    }
  }
  exp_memo_[key] = out;
  return out;
}

PayoffReport Evaluator::report() {
  PayoffReport r;
  r.profile = tree_.profile().name();
  r.params = tree_.params().to_string();
  const NodeId root = tree_.root();
  auto good = latent_value(root, latent::kGood);
  auto bad = latent_value(root, latent::kBad);
  const double p0 = tree_.params().p0();
  for (int i = 0; i < 2; ++i) {
    r.given_good[i] = good[i];
    r.given_bad[i] = bad[i];
    r.gamma[i] = p0 * good[i] + (1.0 - p0) * bad[i];
  }
  r.ne_given_bad = ne_given_bad(root);
  r.settle_depth = settle_depth_;
  r.nodes = tree_.size();
  return r;
}

PayoffReport eval_profile(const ModelParams& params,
                          std::shared_ptr<const StrategyProfile> profile,
                          EvalOptions opts) {
  GameTree tree(params, std::move(profile));
  Evaluator ev(tree, opts);
  return ev.report();
}

}  // namespace stratexp
