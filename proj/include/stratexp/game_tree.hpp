#pragma once

#include <deque>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stratexp/belief_update.hpp"
#include "stratexp/history.hpp"
#include "stratexp/params.hpp"
#include "stratexp/profile.hpp"

namespace stratexp {

// Lazily grown trie of public histories. Each node carries its counters,
// both players' beliefs and the memoized profile value. Children are built
// from the parent's beliefs and profile value, so everything is resolved by
// increasing history length.
class GameTree {
 public:
  GameTree(const ModelParams& params,
           std::shared_ptr<const StrategyProfile> profile);
  GameTree(const ModelParams& params,
           std::shared_ptr<const StrategyProfile> profile, BeliefMode mode);

  const ModelParams& params() const { return params_; }
  const StrategyProfile& profile() const { return *profile_; }
  std::shared_ptr<const StrategyProfile> profile_ptr() const { return profile_; }
  BeliefMode belief_mode() const { return mode_; }

  NodeId root() const { return 0; }
  NodeId child(NodeId n, Action a);
  NodeId parent(NodeId n) const { return nodes_[n].parent; }
  Action last_action(NodeId n) const { return nodes_[n].last; }
  NodeId find(std::span<const Action> history);
  NodeId find(const std::string& history);

  const HistoryCounters& counters(NodeId n) const { return nodes_[n].counters; }
  int depth(NodeId n) const { return nodes_[n].counters.length; }
  const BeliefPair& beliefs(NodeId n) const { return nodes_[n].beliefs; }
  const PlayerBelief& belief(NodeId n, int player) const {
    return nodes_[n].beliefs.player[player];
  }
  double prob_risky(NodeId n);

  std::vector<Action> actions(NodeId n) const;
  std::string history_string(NodeId n) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    NodeId parent = -1;
    NodeId child[2] = {-1, -1};
    Action last = Action::kSafe;
    HistoryCounters counters;
    BeliefPair beliefs;
    double sigma = 0.0;
    signed char sigma_state = 0;  // 0 unknown, 1 busy, 2 ready
  };

  ModelParams params_;
  std::shared_ptr<const StrategyProfile> profile_;
  BeliefMode mode_;
  std::deque<Node> nodes_;
};

}  // namespace stratexp
