#include "stratexp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <json.hpp>

#include "stratexp/errors.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/game_tree.hpp"
#include "stratexp/strategies.hpp"

namespace stratexp {

namespace {

constexpr int kTailWindow = 8;

struct Accum {
  double sum = 0.0, sumsq = 0.0;
  std::int64_t n = 0;
  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  Estimate finish() const {
    Estimate e;
    e.count = n;
    if (n == 0) return e;
    e.mean = sum / n;
    if (n > 1) {
      const double var = std::max(0.0, (sumsq - n * e.mean * e.mean) / (n - 1));
      e.stderr_ = std::sqrt(var / n);
    }
    return e;
  }
};

std::mt19937_64 run_rng(std::uint64_t seed, std::int64_t run) {
  const auto r = static_cast<std::uint64_t>(run);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
  return std::mt19937_64(seq);
}

struct Play {
  std::array<double, 2> payoff{};
  int experiments = 0;
  bool good = false;
  int tail = 0;  // 0 safe, 1 risky, 2 split
};

}  // namespace

int default_horizon(double delta) {
  const double own = std::ceil(std::log(1e-12) / std::log(delta));
  return static_cast<int>(std::clamp(2.0 * own, 64.0, 20000.0));
}

SimResult run_sim(const ModelParams& params, std::shared_ptr<const StrategyProfile> profile,
                  const SimConfig& cfg) {
  if (cfg.runs < 1) throw InvalidParams("runs must be >= 1");
  const int horizon = cfg.horizon > 0 ? cfg.horizon : default_horizon(params.delta());
  if (horizon < 4 * kTailWindow) throw InvalidParams("horizon too short to classify tails");
  const double lam = params.lambda(), d = params.delta(), g = params.g();
  const double m = params.m(), c = params.c();
  GameTree tree(params, profile);

  SimResult res;
  res.profile = profile->name();
  res.params = params.to_string();
  res.seed = cfg.seed;
  res.runs = cfg.runs;
  res.horizon = horizon;
  std::array<Accum, 2> all, good, bad;

  std::vector<Action> trail;  // actions per half-move, for tail checks
  for (std::int64_t run = 0; run < cfg.runs; ++run) {
    auto rng = run_rng(cfg.seed, run);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Play play;
    play.good = cfg.force_good ? *cfg.force_good : unif(rng) < params.p0();
    std::array<bool, 2> won{};
    std::array<double, 2> weight{1.0, 1.0};  // delta^(own moves so far)
    int last_risky = -1;
    trail.clear();
    NodeId n = tree.root();
    // Past the horizon, keep playing until each player's last moves are
    // constant (mixing profiles can idle on S for a long time).
    auto tail_kind = [&](int upto) {
      std::array<int, 2> risky{}, total{};
      for (int k = upto - 2 * kTailWindow; k < upto; ++k) {
        ++total[k % 2];
        risky[k % 2] += trail[k] == Action::kRisky;
      }
      for (int i = 0; i < 2; ++i) {
        if (risky[i] != 0 && risky[i] != total[i]) return -1;
      }
      const bool r0 = risky[0] != 0, r1 = risky[1] != 0;
      return r0 && r1 ? 1 : (!r0 && !r1 ? 0 : 2);
    };
    const int cap = 20 * horizon;
    play.tail = -1;
    int t = 0;
    for (; t < cap; ++t) {
      if (t >= horizon && t % 2 == 0) {
        play.tail = tail_kind(t);
        if (play.tail >= 0) break;
      }
      const int i = t % 2;
      if (won[0] && won[1]) {
        // both know theta = G and play R for good
        play.payoff[0] += weight[0] * g;
        play.payoff[1] += weight[1] * g;
        play.tail = 1;
        break;
      }
      Action a;
      if (won[i]) {
        a = Action::kRisky;
      } else {
        const double x = tree.prob_risky(n);
        a = (x >= 1.0 || (x > 0.0 && unif(rng) < x)) ? Action::kRisky : Action::kSafe;
      }
      if (a == Action::kRisky) {
        double flow = -c;
        if (won[i]) {
          flow += lam * m;  // expected flow, theta = G known
        } else {
          ++play.experiments;
          last_risky = t;
          if (play.good && unif(rng) < lam) {
            won[i] = true;
            flow += m;
          }
        }
        play.payoff[i] += (1 - d) * weight[i] * flow;
      }
      weight[i] *= d;
      trail.push_back(a);
      n = tree.child(n, a);
    }
    if (play.tail < 0) {
      throw UnclassifiableTail("run " + std::to_string(run) + " has not settled after " +
                               std::to_string(cap) + " half-periods");
    }
    const int end = t;
    const bool late = last_risky >= end - 2 * kTailWindow;
    const int ne = play.tail != 0 && late ? kNeverSettles : play.experiments;
    for (int i = 0; i < 2; ++i) {
      all[i].add(play.payoff[i]);
      (play.good ? good : bad)[i].add(play.payoff[i]);
    }
    ++(play.good ? res.ne_given_good : res.ne_given_bad)[ne];
    (play.tail == 0 ? res.settled_safe
                    : play.tail == 1 ? res.settled_risky : res.settled_split)++;
  }
  for (int i = 0; i < 2; ++i) {
    res.gamma[i] = all[i].finish();
    res.given_good[i] = good[i].finish();
    res.given_bad[i] = bad[i].finish();
  }
  return res;
}

SimResult run_sim(const ModelParams& params, const SimConfig& cfg) {
  return run_sim(params, make_profile(cfg.profile, params), cfg);
}

void SimResult::write_csv(std::ostream& os) const {
  os << "# format: stratexp/ne-histogram/v1 profile=" << profile << " params=" << params
     << " seed=" << seed << " runs=" << runs << "\n";
  os << "theta,n_e,count,fraction\n";
  auto emit = [&](const char* theta, const std::map<int, std::int64_t>& h) {
    std::int64_t total = 0;
    for (const auto& [k, v] : h) total += v;
    for (const auto& [k, v] : h) {
      os << theta << ',' << (k == kNeverSettles ? std::string("inf") : std::to_string(k))
         << ',' << v << ',' << static_cast<double>(v) / total << "\n";
    }
  };
  emit("B", ne_given_bad);
  emit("G", ne_given_good);
}

std::string SimResult::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "stratexp/simulation/v1";
  j["profile"] = profile;
  j["params"] = params;
  j["seed"] = seed;
  j["runs"] = runs;
  j["horizon"] = horizon;
  auto est = [](const Estimate& e) {
    return nlohmann::ordered_json{{"mean", e.mean}, {"stderr", e.stderr_}, {"runs", e.count}};
  };
  for (int i = 0; i < 2; ++i) {
    const std::string key = "player" + std::to_string(i + 1);
    j["gamma"][key] = est(gamma[i]);
    j["given_good"][key] = est(given_good[i]);
    j["given_bad"][key] = est(given_bad[i]);
  }
  auto hist = [](const std::map<int, std::int64_t>& h) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : h) o[k == kNeverSettles ? "inf" : std::to_string(k)] = v;
    return o;
  };
  j["ne_given_bad"] = hist(ne_given_bad);
  j["ne_given_good"] = hist(ne_given_good);
  j["settled"] = {{"safe_forever", settled_safe},
                  {"risky_forever", settled_risky},
                  {"split", settled_split}};
  return j.dump(2);
}

}  // namespace stratexp
