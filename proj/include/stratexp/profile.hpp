#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stratexp/belief_update.hpp"
#include "stratexp/history.hpp"
#include "stratexp/params.hpp"

namespace stratexp {

class GameTree;
using NodeId = std::int32_t;

// What a profile may look at when choosing the action at a node.
class NodeContext {
 public:
  NodeContext(GameTree& tree, NodeId node) : tree_(&tree), node_(node) {}

  NodeId node() const { return node_; }
  GameTree& tree() const { return *tree_; }
  int active_player() const { return counters().active_player(); }
  const HistoryCounters& counters() const;
  const PlayerBelief& belief(int player) const;
  const ModelParams& params() const;
  const std::vector<Action>& actions() const;
  // Profile value at another history of the same tree (used by profiles
  // that are defined by shifting to a canonical history).
  double prob_risky_at(std::span<const Action> history) const;

 private:
  GameTree* tree_;
  NodeId node_;
  mutable std::optional<std::vector<Action>> actions_;
};

// Actions seen over the lookahead window, with the success pattern.
struct SettleQuery {
  std::array<bool, 2> successful{};
  std::array<Action, 2> action{};
};

// Probability that the never-successful active player picks R. A successful
// player picks R unless the evaluator's relaxation switch is on.
class StrategyProfile {
 public:
  virtual ~StrategyProfile() = default;

  virtual std::string name() const = 0;
  virtual double prob_risky(const NodeContext& ctx) const = 0;

  virtual std::string parameters() const { return ""; }
  virtual BeliefMode belief_mode() const { return BeliefMode::kReasonable; }
  virtual bool is_pure() const { return true; }
  // Extra half-periods before the depth rule may classify a tail.
  virtual int horizon_hint() const { return 0; }

  // Called once the lookahead window showed constant actions. True means
  // play continues that way forever; nullopt defers to the depth rule.
  virtual std::optional<bool> settled(const NodeContext& ctx,
                                      const SettleQuery& q) const {
    (void)ctx;
    (void)q;
    return std::nullopt;
  }

  // True when the continuation after h·S·S is the continuation after h.
  virtual bool repeats_after_two_safe(const NodeContext& ctx) const {
    (void)ctx;
    return false;
  }

  // Only consulted when the evaluator lets successful players pick S.
  virtual double prob_risky_if_successful(const NodeContext& ctx) const {
    (void)ctx;
    return 1.0;
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  int near_ties() const { return near_ties_; }

 protected:
  void warn(std::string w) { warnings_.push_back(std::move(w)); }
  // Threshold test that records ties inside the genericity band.
  bool at_or_above(double p, double cut) const;

 private:
  std::vector<std::string> warnings_;
  mutable int near_ties_ = 0;
};

// Settle rule for profiles that, past their opening, play R exactly when the
// active player's belief clears a threshold. Successful players keep R,
// convinced players keep R, and an unconvinced S is stable once his belief
// stopped moving over the last period.
bool frozen_play(const NodeContext& ctx, const SettleQuery& q);

// Table-driven profile for tests: listed histories get the given
// probability, everything else the default.
class TableProfile : public StrategyProfile {
 public:
  TableProfile(std::string name, double default_prob)
      : name_(std::move(name)), default_(default_prob) {}
  void set(std::span<const Action> history, double prob);
  std::string name() const override { return name_; }
  double prob_risky(const NodeContext& ctx) const override;
  bool is_pure() const override;

 private:
  std::string name_;
  double default_;
  std::vector<std::pair<std::vector<Action>, double>> entries_;
};

}  // namespace stratexp
