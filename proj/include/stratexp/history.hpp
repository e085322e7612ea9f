#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stratexp {

enum class Action : std::uint8_t { kSafe = 0, kRisky = 1 };

inline char action_char(Action a) { return a == Action::kRisky ? 'R' : 'S'; }
inline Action other(Action a) {
  return a == Action::kRisky ? Action::kSafe : Action::kRisky;
}

// Players are 0 and 1 internally; printed as 1 and 2.
inline int other_player(int i) { return 1 - i; }

// Experiment and disclosure counters of a public history.
struct HistoryCounters {
  int length = 0;
  int n_e_i[2] = {0, 0};
  int d[2] = {0, 0};  // disclosed
  int u[2] = {0, 0};  // undisclosed: trailing run of own R

  int active_player() const { return length % 2; }
  int n_e() const { return n_e_i[0] + n_e_i[1]; }
  HistoryCounters extended(Action a) const;
  bool operator==(const HistoryCounters& o) const;
};

HistoryCounters count_from_scratch(std::span<const Action> actions);

// Immutable history with shared prefixes. Extension is O(1).
class PublicHistory {
 public:
  PublicHistory() = default;
  explicit PublicHistory(std::span<const Action> actions);

  PublicHistory extend(Action a) const;
  const HistoryCounters& counters() const;
  int size() const { return counters().length; }
  bool empty() const { return size() == 0; }
  int active_player() const { return counters().active_player(); }
  std::vector<Action> actions() const;
  Action last() const;

  static PublicHistory parse(std::string_view text);
  std::string render() const;

  bool operator==(const PublicHistory& o) const;

 private:
  struct Node {
    std::shared_ptr<const Node> parent;
    Action action;
    HistoryCounters counters;
  };
  explicit PublicHistory(std::shared_ptr<const Node> tail)
      : tail_(std::move(tail)) {}
  std::shared_ptr<const Node> tail_;
};

// Compact grammar: S, R, groups "(RR)^k", separators "·" or "*".
// An empty string or "∅" is the empty history.
std::vector<Action> parse_actions(std::string_view text);
std::string render_actions(std::span<const Action> actions);

}  // namespace stratexp
