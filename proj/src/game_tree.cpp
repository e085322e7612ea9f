#include "stratexp/game_tree.hpp"

#include <stdexcept>

#include "stratexp/cutoffs.hpp"

namespace stratexp {

GameTree::GameTree(const ModelParams& params,
                   std::shared_ptr<const StrategyProfile> profile)
    : GameTree(params, profile, profile->belief_mode()) {}

GameTree::GameTree(const ModelParams& params,
                   std::shared_ptr<const StrategyProfile> profile,
                   BeliefMode mode)
    : params_(params), profile_(std::move(profile)), mode_(mode) {
  Node root;
  root.beliefs = initial_beliefs(params_);
  nodes_.push_back(root);
}

NodeId GameTree::child(NodeId n, Action a) {
  const int slot = static_cast<int>(a);
  if (nodes_[n].child[slot] >= 0) return nodes_[n].child[slot];
  const double sigma = prob_risky(n);
  Node c;
  c.parent = n;
  c.last = a;
  c.counters = nodes_[n].counters.extended(a);
  c.beliefs = next_beliefs(nodes_[n].beliefs, nodes_[n].counters, a, sigma,
                           mode_, params_);
  // prob_risky may have grown the tree; look the slot up again.
  if (nodes_[n].child[slot] >= 0) return nodes_[n].child[slot];
  nodes_.push_back(c);
  const NodeId id = static_cast<NodeId>(nodes_.size() - 1);
  nodes_[n].child[slot] = id;
  return id;
}

NodeId GameTree::find(std::span<const Action> history) {
  NodeId n = root();
  for (Action a : history) n = child(n, a);
  return n;
}

NodeId GameTree::find(const std::string& history) {
  auto acts = parse_actions(history);
  return find(std::span<const Action>(acts));
}

double GameTree::prob_risky(NodeId n) {
  Node& node = nodes_[n];
  if (node.sigma_state == 2) return node.sigma;
  if (node.sigma_state == 1) {
    throw std::logic_error("profile refers to itself at " + history_string(n));
  }
  node.sigma_state = 1;
  NodeContext ctx(*this, n);
  double x;
  try {
    x = profile_->prob_risky(ctx);
  } catch (...) {
    nodes_[n].sigma_state = 0;
    throw;
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::logic_error("profile returned a probability outside [0,1]");
  }
  nodes_[n].sigma = x;
  nodes_[n].sigma_state = 2;
  return x;
}

std::vector<Action> GameTree::actions(NodeId n) const {
  std::vector<Action> out(nodes_[n].counters.length);
  std::size_t k = out.size();
  for (NodeId x = n; x > 0; x = nodes_[x].parent) out[--k] = nodes_[x].last;
  return out;
}

std::string GameTree::history_string(NodeId n) const {
  auto acts = actions(n);
  return render_actions(acts);
}

// NodeContext and profile helpers live here because they need the tree.

const HistoryCounters& NodeContext::counters() const {
  return tree_->counters(node_);
}

const PlayerBelief& NodeContext::belief(int player) const {
  return tree_->belief(node_, player);
}

const ModelParams& NodeContext::params() const { return tree_->params(); }

const std::vector<Action>& NodeContext::actions() const {
  if (!actions_) actions_ = tree_->actions(node_);
  return *actions_;
}

double NodeContext::prob_risky_at(std::span<const Action> history) const {
  return tree_->prob_risky(tree_->find(history));
}

bool StrategyProfile::at_or_above(double p, double cut) const {
  CutoffTest t = compare_to_cutoff(p, cut);
  if (t.near_tie) ++near_ties_;
  return t.at_or_above;
}

bool frozen_play(const NodeContext& ctx, const SettleQuery& q) {
  GameTree& tree = ctx.tree();
  const NodeId n = ctx.node();
  const NodeId back = tree.depth(n) >= 2 ? tree.parent(tree.parent(n)) : -1;
  for (int i = 0; i < 2; ++i) {
    if (q.successful[i]) {
      if (q.action[i] != Action::kRisky) return false;
      continue;
    }
    const PlayerBelief& b = ctx.belief(i);
    if (q.action[i] == Action::kRisky) {
      // an unconvinced player cannot keep experimenting under a threshold rule
      if (!b.p.is_certain()) return false;
      continue;
    }
    // S persists only while the belief has stopped moving
    if (b.p.is_certain() || back < 0) return false;
    const PlayerBelief& before = tree.belief(back, i);
    if (before.p.is_certain() || before.p.lr() != b.p.lr()) return false;
  }
  return true;
}

void TableProfile::set(std::span<const Action> history, double prob) {
  entries_.emplace_back(std::vector<Action>(history.begin(), history.end()),
                        prob);
}

double TableProfile::prob_risky(const NodeContext& ctx) const {
  const auto& h = ctx.actions();
  for (const auto& [key, prob] : entries_) {
    if (key == h) return prob;
  }
  return default_;
}

bool TableProfile::is_pure() const {
  auto pure = [](double x) { return x == 0.0 || x == 1.0; };
  if (!pure(default_)) return false;
  for (const auto& e : entries_) {
    if (!pure(e.second)) return false;
  }
  return true;
}

}  // namespace stratexp
