#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "stratexp/belief_update.hpp"
#include "stratexp/history.hpp"
#include "stratexp/profile.hpp"

namespace stratexp {

enum class Traversal { kBreadthFirst, kDepthFirstSafeFirst, kDepthFirstRiskyFirst };

// Beliefs of both never-successful players at every public history up to a
// horizon (in half-periods).
class BeliefSystem {
 public:
  BeliefSystem(const ModelParams& params, std::shared_ptr<const StrategyProfile> profile,
               BeliefMode mode, int horizon, Traversal order = Traversal::kBreadthFirst);

  int horizon() const { return horizon_; }
  BeliefMode mode() const { return mode_; }
  // Throws HorizonExceeded beyond the horizon.
  const BeliefPair& at(std::span<const Action> history) const;
  const BeliefPair& at(const std::string& history) const;
  double prob_risky(const std::string& history) const;

  std::size_t size() const { return entries_.size(); }
  // Histories in length-then-lexicographic order (S before R).
  std::vector<std::string> histories() const;

  // history,p1,p2,q1,q2,provenance; provenance lists both players.
  void write_csv(std::ostream& os) const;
  void write_csv(std::ostream& os, const std::vector<std::string>& only) const;

 private:
  struct Entry {
    BeliefPair beliefs;
    double sigma = 0.0;
  };
  int horizon_;
  BeliefMode mode_;
  std::map<std::vector<Action>, Entry> entries_;
};

BeliefSystem reasonable_beliefs(const ModelParams& params,
                                std::shared_ptr<const StrategyProfile> profile,
                                int horizon);
BeliefSystem appendixB_beliefs(const ModelParams& params,
                               std::shared_ptr<const StrategyProfile> profile,
                               int horizon);

}  // namespace stratexp
