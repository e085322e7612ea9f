#pragma once

#include <memory>
#include <string>

#include "stratexp/evaluator.hpp"
#include "stratexp/game_tree.hpp"
#include "stratexp/strategies.hpp"

namespace stratexp::testing {

// Exact value for player 1 of following `script` from the root (then S,
// everybody R after any departure), holding belief p and assigning q to a
// past success of the opponent.
inline double path_value(const ModelParams& pr, const std::string& script, double p,
                         double q) {
  auto prof = std::make_shared<ScriptProfile>("path", parse_actions(script));
  GameTree tree(pr, prof);
  Evaluator ev(tree);
  PlayerBelief b;
  b.p = Belief::from_probability(p);
  b.q = q;
  return ev.continuation_value(tree.root(), 0, b);
}

inline std::string repeat(const std::string& s, int k) {
  std::string out;
  for (int i = 0; i < k; ++i) out += s;
  return out;
}

}  // namespace stratexp::testing
