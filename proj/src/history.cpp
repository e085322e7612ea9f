#include "stratexp/history.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "stratexp/errors.hpp"

namespace stratexp {

HistoryCounters HistoryCounters::extended(Action a) const {
  HistoryCounters out = *this;
  const int i = active_player();
  if (a == Action::kRisky) {
    ++out.n_e_i[i];
    ++out.u[i];
  } else {
    out.d[i] = out.n_e_i[i];
    out.u[i] = 0;
  }
  ++out.length;
  return out;
}

bool HistoryCounters::operator==(const HistoryCounters& o) const {
  return length == o.length && n_e_i[0] == o.n_e_i[0] &&
         n_e_i[1] == o.n_e_i[1] && d[0] == o.d[0] && d[1] == o.d[1] &&
         u[0] == o.u[0] && u[1] == o.u[1];
}

HistoryCounters count_from_scratch(std::span<const Action> actions) {
  HistoryCounters c;
  c.length = static_cast<int>(actions.size());
  for (int i = 0; i < 2; ++i) {
    std::vector<Action> own;
    for (std::size_t t = i; t < actions.size(); t += 2) own.push_back(actions[t]);
    c.n_e_i[i] = static_cast<int>(
        std::count(own.begin(), own.end(), Action::kRisky));
    int run = 0;
    for (auto it = own.rbegin(); it != own.rend() && *it == Action::kRisky; ++it)
      ++run;
    c.u[i] = run;
    c.d[i] = c.n_e_i[i] - run;
  }
  return c;
}

PublicHistory::PublicHistory(std::span<const Action> actions) {
  PublicHistory h;
  for (Action a : actions) h = h.extend(a);
  tail_ = h.tail_;
}

PublicHistory PublicHistory::extend(Action a) const {
  auto node = std::make_shared<Node>(Node{tail_, a, counters().extended(a)});
  return PublicHistory(std::move(node));
}

const HistoryCounters& PublicHistory::counters() const {
  static const HistoryCounters kEmpty;
  return tail_ ? tail_->counters : kEmpty;
}

std::vector<Action> PublicHistory::actions() const {
  std::vector<Action> out(size());
  std::size_t k = out.size();
  for (const Node* n = tail_.get(); n != nullptr; n = n->parent.get())
    out[--k] = n->action;
  return out;
}

Action PublicHistory::last() const {
  if (!tail_) throw std::out_of_range("empty history has no last action");
  return tail_->action;
}

PublicHistory PublicHistory::parse(std::string_view text) {
  auto acts = parse_actions(text);
  return PublicHistory(std::span<const Action>(acts));
}

std::string PublicHistory::render() const {
  auto acts = actions();
  return render_actions(acts);
}

bool PublicHistory::operator==(const PublicHistory& o) const {
  return size() == o.size() && actions() == o.actions();
}

namespace {

constexpr std::string_view kMiddleDot = "\xC2\xB7";
constexpr std::string_view kEmptySet = "\xE2\x88\x85";

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Action> run() {
    if (text_ == kEmptySet) return {};
    auto out = sequence(0);
    if (pos_ != text_.size()) fail("unexpected ')'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(pos_, what);
  }

  bool at_separator() const {
    return text_.substr(pos_, kMiddleDot.size()) == kMiddleDot ||
           (pos_ < text_.size() && text_[pos_] == '*');
  }

  std::vector<Action> sequence(int depth) {
    std::vector<Action> out;
    while (pos_ < text_.size()) {
      if (at_separator()) {
        pos_ += text_[pos_] == '*' ? 1 : kMiddleDot.size();
        continue;
      }
      char ch = text_[pos_];
      std::vector<Action> item;
      if (ch == 'S' || ch == 'R') {
        item.push_back(ch == 'R' ? Action::kRisky : Action::kSafe);
        ++pos_;
      } else if (ch == '(') {
        ++pos_;
        item = sequence(depth + 1);
        if (pos_ >= text_.size() || text_[pos_] != ')') fail("missing ')'");
        ++pos_;
      } else if (ch == ')') {
        if (depth == 0) fail("unbalanced ')'");
        return out;
      } else {
        fail(std::string("unexpected character '") + ch + "'");
      }
      long reps = 1;
      if (pos_ < text_.size() && text_[pos_] == '^') {
        ++pos_;
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
          fail("expected digits after '^'");
        reps = 0;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          reps = reps * 10 + (text_[pos_] - '0');
          if (reps > 100000) fail("repetition count too large");
          ++pos_;
        }
      }
      for (long r = 0; r < reps; ++r) out.insert(out.end(), item.begin(), item.end());
    }
    if (depth > 0) fail("missing ')'");
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Action> parse_actions(std::string_view text) {
  return Parser(text).run();
}

std::string render_actions(std::span<const Action> actions) {
  std::string out;
  out.reserve(actions.size());
  for (Action a : actions) out.push_back(action_char(a));
  return out;
}

}  // namespace stratexp
