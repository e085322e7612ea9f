#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stratexp/game_tree.hpp"

namespace stratexp {

// Hidden state seen by the evaluator: theta plus who has already succeeded.
// 0 is theta = B; 1..4 are theta = G with success bits (bit i: player i).
namespace latent {
constexpr int kBad = 0;
constexpr int kGood = 1;  // nobody successful yet
inline bool good(int l) { return l != kBad; }
inline bool successful(int l, int player) {
  return l != kBad && (((l - 1) >> player) & 1);
}
inline int with_success(int l, int player) { return 1 + ((l - 1) | (1 << player)); }
inline int pattern(int l) { return l == kBad ? 0 : l - 1; }
}  // namespace latent

struct EvalOptions {
  int settle_depth = -1;  // -1: 2(N~ + N* + 4) plus the profile's hint
  int depth_cap = 400;
  int window = 8;
  bool successful_may_play_safe = false;
};

constexpr int kNeverSettles = -1;  // N_e key for plays that never stop

struct PayoffReport {
  std::string profile;
  std::string params;
  std::array<double, 2> gamma{};
  std::array<double, 2> given_good{};
  std::array<double, 2> given_bad{};
  std::map<int, double> ne_given_bad;  // kNeverSettles for R-forever plays
  int settle_depth = 0;
  std::size_t nodes = 0;
};

class Evaluator {
 public:
  explicit Evaluator(GameTree& tree, EvalOptions opts = {});

  GameTree& tree() { return tree_; }
  int settle_depth() const { return settle_depth_; }

  // Both players' values at n in latent state l, each normalized to that
  // player's next move.
  std::array<double, 2> latent_value(NodeId n, int l);

  // Value of `player` at n when he has never succeeded and holds belief b.
  double continuation_value(NodeId n, int player, const PlayerBelief& b);
  double continuation_value(NodeId n, int player);

  // Active player's value of choosing a at n under his own belief.
  double action_value(NodeId n, Action a);
  double action_value(NodeId n, Action a, const PlayerBelief& b);

  std::map<int, double> ne_given_bad(NodeId n);
  // E[sum of delta^t over the player's own experiments | theta = B].
  double discounted_experiments_given_bad(NodeId n, int player);

  // Constant continuation actions when play from n has settled for the
  // success pattern of latent l.
  std::optional<std::array<Action, 2>> settled_actions(NodeId n, int l);

  PayoffReport report();

 private:
  double prob_risky(NodeId n, int l);
  std::array<double, 2> risky_branch(NodeId n, int l);
  bool cycle_applies(NodeId n, int l);
  std::array<double, 2>& memo(NodeId n, int l);
  double tail_value(Action a, int l) const;
  std::vector<std::pair<int, double>> weights(int player,
                                              const PlayerBelief& b) const;

  GameTree& tree_;
  EvalOptions opts_;
  int settle_depth_;
  std::vector<std::array<double, 2>> memo_;
  std::vector<unsigned char> settle_cache_;
  std::map<NodeId, std::map<int, double>> ne_memo_;
  std::map<std::pair<NodeId, int>, double> exp_memo_;
};

PayoffReport eval_profile(const ModelParams& params,
                          std::shared_ptr<const StrategyProfile> profile,
                          EvalOptions opts = {});

}  // namespace stratexp
