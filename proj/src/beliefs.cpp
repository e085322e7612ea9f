#include "stratexp/beliefs.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <functional>

#include "stratexp/errors.hpp"
#include "stratexp/game_tree.hpp"

namespace stratexp {

BeliefSystem::BeliefSystem(const ModelParams& params,
                           std::shared_ptr<const StrategyProfile> profile,
                           BeliefMode mode, int horizon, Traversal order)
    : horizon_(horizon), mode_(mode) {
  if (horizon < 0) throw InvalidParams("horizon must be >= 0");
  if (horizon > 24) throw InvalidParams("horizon above 24 half-periods is too large to tabulate");
  GameTree tree(params, std::move(profile), mode);
  auto record = [&](NodeId n) {
    Entry e;
    e.beliefs = tree.beliefs(n);
    e.sigma = tree.prob_risky(n);
    entries_.emplace(tree.actions(n), e);
  };
  if (order == Traversal::kBreadthFirst) {
    std::deque<NodeId> queue{tree.root()};
    while (!queue.empty()) {
      const NodeId n = queue.front();
      queue.pop_front();
      record(n);
      if (tree.depth(n) == horizon) continue;
      queue.push_back(tree.child(n, Action::kSafe));
      queue.push_back(tree.child(n, Action::kRisky));
    }
  } else {
    const Action first = order == Traversal::kDepthFirstSafeFirst ? Action::kSafe
                                                                  : Action::kRisky;
    std::function<void(NodeId)> visit = [&](NodeId n) {
      if (tree.depth(n) < horizon) {
        visit(tree.child(n, first));
        visit(tree.child(n, other(first)));
      }
      record(n);
    };
    visit(tree.root());
  }
}

const BeliefPair& BeliefSystem::at(std::span<const Action> history) const {
  if (static_cast<int>(history.size()) > horizon_) {
    throw HorizonExceeded("history of length " + std::to_string(history.size()) +
                          " is beyond the horizon " + std::to_string(horizon_));
  }
  return entries_.at(std::vector<Action>(history.begin(), history.end())).beliefs;
}

const BeliefPair& BeliefSystem::at(const std::string& history) const {
  auto acts = parse_actions(history);
  return at(std::span<const Action>(acts));
}

double BeliefSystem::prob_risky(const std::string& history) const {
  auto acts = parse_actions(history);
  if (static_cast<int>(acts.size()) > horizon_) {
    throw HorizonExceeded("history is beyond the horizon");
  }
  return entries_.at(acts).sigma;
}

std::vector<std::string> BeliefSystem::histories() const {
  std::vector<std::vector<Action>> keys;
  for (const auto& [k, v] : entries_) keys.push_back(k);
  std::stable_sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
    return a.size() < b.size();
  });
  std::vector<std::string> out;
  for (const auto& k : keys) out.push_back(render_actions(k));
  return out;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

}  // namespace

void BeliefSystem::write_csv(std::ostream& os) const {
  write_csv(os, histories());
}

void BeliefSystem::write_csv(std::ostream& os,
                             const std::vector<std::string>& only) const {
  os << "# format: stratexp/beliefs/v1 mode=" << to_string(mode_) << "\n";
  os << "history,p1,p2,q1,q2,provenance\n";
  for (const auto& h : only) {
    const BeliefPair& b = at(h);
    os << (h.empty() ? "∅" : h) << ',' << num(b.player[0].p.value()) << ','
       << num(b.player[1].p.value()) << ',' << num(b.player[0].q) << ','
       << num(b.player[1].q) << ',' << to_string(b.player[0].provenance) << '/'
       << to_string(b.player[1].provenance) << "\n";
  }
}

BeliefSystem reasonable_beliefs(const ModelParams& params,
                                std::shared_ptr<const StrategyProfile> profile,
                                int horizon) {
  return BeliefSystem(params, std::move(profile), BeliefMode::kReasonable, horizon);
}

BeliefSystem appendixB_beliefs(const ModelParams& params,
                               std::shared_ptr<const StrategyProfile> profile,
                               int horizon) {
  return BeliefSystem(params, std::move(profile), BeliefMode::kAppendixB, horizon);
}

}  // namespace stratexp
