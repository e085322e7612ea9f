#include "stratexp/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/game_tree.hpp"

namespace stratexp {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

int n_star(const ModelParams& params) {
  return first_index_below(params.p0(), cutoff_p_star(params), params).n;
}

void require_prior(const ModelParams& params) {
  if (params.p0() < cutoff_p_star(params)) {
    throw PriorTooLow("p0 = " + fmt(params.p0()) + " is below p* = " +
                      fmt(cutoff_p_star(params)));
  }
}

std::vector<Action> repeat(std::initializer_list<Action> block, int times) {
  std::vector<Action> out;
  for (int t = 0; t < times; ++t) out.insert(out.end(), block);
  return out;
}

// Offset o such that the profile at h equals the profile at h[o:], for
// profiles that treat an opening S by shifting. Returns -1 when the profile
// prescribes S outright (the h = S case without a role switch).
int canonical_offset(const std::vector<Action>& h, bool roles_switch) {
  std::size_t off = 0;
  if (roles_switch) {
    while (off < h.size() && h[off] == Action::kSafe) ++off;
    return static_cast<int>(off);
  }
  while (off < h.size() && h[off] == Action::kSafe) {
    if (off + 1 == h.size()) return -1;
    if (h[off + 1] == Action::kSafe) {
      off += 2;
    } else {
      off += 1;  // S R h' plays as R h'
      break;
    }
  }
  return static_cast<int>(off);
}

double shifted_prob(const NodeContext& ctx, bool roles_switch) {
  const auto& h = ctx.actions();
  const int off = canonical_offset(h, roles_switch);
  if (off < 0) return 0.0;
  return ctx.prob_risky_at(
      std::span<const Action>(h.data() + off, h.size() - off));
}

bool convinced(const NodeContext& ctx) {
  return ctx.belief(ctx.active_player()).p.is_certain();
}

class Sigma0Profile : public StrategyProfile {
 public:
  explicit Sigma0Profile(int n_star) : n_star_(n_star) {}
  std::string name() const override { return "sigma0"; }
  std::string parameters() const override {
    return "N*=" + std::to_string(n_star_);
  }
  double prob_risky(const NodeContext& ctx) const override {
    if (!on_path(ctx)) return 1.0;
    return ctx.counters().length < 2 * n_star_ ? 1.0 : 0.0;
  }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override {
    const bool path = on_path(ctx);
    if (path && ctx.counters().length < 2 * n_star_) return false;
    for (int i = 0; i < 2; ++i) {
      if (path && !q.successful[i] && q.action[i] != Action::kSafe) return false;
      if (!path && q.action[i] != Action::kRisky) return false;
    }
    return true;
  }

 private:
  // every period so far was RR, up to N* of them, then only S
  bool on_path(const NodeContext& ctx) const {
    const auto& h = ctx.actions();
    for (std::size_t t = 0; t < h.size(); ++t) {
      const bool early = t < static_cast<std::size_t>(2 * n_star_);
      if (h[t] != (early ? Action::kRisky : Action::kSafe)) return false;
    }
    return true;
  }
  int n_star_;
};

class ThresholdProfile : public StrategyProfile {
 public:
  explicit ThresholdProfile(const ModelParams& params)
      : p_hat_(cutoff_p_hat(params)) {}
  std::string name() const override { return "threshold_phat"; }
  std::string parameters() const override { return "p_hat=" + fmt(p_hat_); }
  double prob_risky(const NodeContext& ctx) const override {
    const PlayerBelief& b = ctx.belief(ctx.active_player());
    if (b.p.is_certain()) return 1.0;
    return at_or_above(b.p.value(), p_hat_) ? 1.0 : 0.0;
  }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override {
    return frozen_play(ctx, q);
  }

 private:
  double p_hat_;
};

class Example622Profile : public StrategyProfile {
 public:
  explicit Example622Profile(const ModelParams& params) {
    const double lo = cutoff_p_star_n(params, 1);
    const double hi = phi_inverse(cutoff_p_hat(params), params);
    if (lo > hi) {
      warn("EmptyRegion: [p*_1, phi^-1(p_hat)] = [" + fmt(lo) + ", " +
           fmt(hi) + "] is empty");
    } else if (params.p0() < lo || params.p0() > hi) {
      warn("p0 = " + fmt(params.p0()) + " lies outside [" + fmt(lo) + ", " +
           fmt(hi) + "]");
    }
  }
  std::string name() const override { return "example_622"; }
  double prob_risky(const NodeContext& ctx) const override {
    const auto& h = ctx.actions();
    // empty history, or S^k followed by one action
    bool opening = true;
    for (std::size_t t = 0; t + 1 < h.size(); ++t) {
      if (h[t] != Action::kSafe) {
        opening = false;
        break;
      }
    }
    if (opening) return 1.0;
    return convinced(ctx) ? 1.0 : 0.0;
  }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override {
    return frozen_play(ctx, q);
  }
};

class Remark6Profile : public StrategyProfile {
 public:
  explicit Remark6Profile(const ModelParams& params) {
    const double lo = cutoff_p_star(params);
    const double hi = std::min(cutoff_p_star_n(params, 1),
                               phi_inverse(cutoff_p_hat(params), params));
    if (lo > hi) {
      warn("EmptyRegion: [p*, min(p*_1, phi^-1(p_hat))] = [" + fmt(lo) +
           ", " + fmt(hi) + "] is empty");
    } else if (params.p0() < lo || params.p0() > hi) {
      warn("p0 = " + fmt(params.p0()) + " lies outside [" + fmt(lo) + ", " +
           fmt(hi) + "]");
    }
  }
  std::string name() const override { return "remark6"; }
  std::string parameters() const override {
    return std::string("roles_switch=") + (switch_ ? "1" : "0");
  }
  double prob_risky(const NodeContext& ctx) const override {
    const auto& h = ctx.actions();
    if (h.empty()) return 1.0;
    if (h[0] == Action::kSafe) return shifted_prob(ctx, switch_);
    return convinced(ctx) ? 1.0 : 0.0;
  }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override {
    return frozen_play(ctx, q);
  }
  void set_roles_switch(bool s) { switch_ = s; }

 private:
  bool switch_ = true;
};

class PublicBudgetProfile : public StrategyProfile {
 public:
  PublicBudgetProfile(int n_star, int leader)
      : n_star_(n_star), leader_(leader) {}
  std::string name() const override {
    return leader_ == 0 ? "public_sigma1" : "public_sigma2";
  }
  std::string parameters() const override {
    return "N*=" + std::to_string(n_star_);
  }
  double prob_risky(const NodeContext& ctx) const override {
    const auto& c = ctx.counters();
    const int budget = n_star_ - c.n_e();
    if (budget <= 0) return 0.0;
    if (c.length == 0) return ctx.active_player() == leader_ ? 1.0 : 0.0;
    const auto& h = ctx.actions();
    const double prev = ctx.prob_risky_at(
        std::span<const Action>(h.data(), h.size() - 1));
    const bool consistent = (prev == 1.0) == (h.back() == Action::kRisky);
    return consistent || budget % 2 == 0 ? 1.0 : 0.0;
  }
  std::optional<bool> settled(const NodeContext& ctx,
                              const SettleQuery& q) const override {
    for (int i = 0; i < 2; ++i) {
      if (!q.successful[i] && q.action[i] != Action::kSafe) return false;
    }
    return ctx.counters().n_e() >= n_star_;
  }

 private:
  int n_star_;
  int leader_;
};

}  // namespace

// ---------------------------------------------------------------------------

ScriptProfile::ScriptProfile(std::string name, std::vector<Action> script)
    : name_(std::move(name)), script_(std::move(script)) {}

std::string ScriptProfile::parameters() const {
  return "script=" + render_actions(script_);
}

bool ScriptProfile::on_script(const std::vector<Action>& h) const {
  for (std::size_t t = 0; t < h.size(); ++t) {
    const Action want = t < script_.size() ? script_[t] : Action::kSafe;
    if (h[t] != want) return false;
  }
  return true;
}

double ScriptProfile::prob_risky(const NodeContext& ctx) const {
  const auto& h = ctx.actions();
  if (!on_script(h)) return 1.0;
  if (h.size() < script_.size()) {
    return script_[h.size()] == Action::kRisky ? 1.0 : 0.0;
  }
  return 0.0;
}

std::optional<bool> ScriptProfile::settled(const NodeContext& ctx,
                                           const SettleQuery& q) const {
  const auto& h = ctx.actions();
  // off script everything is R; on script only the S tail is constant
  const bool tail = on_script(h);
  if (tail && h.size() < script_.size()) return false;
  for (int i = 0; i < 2; ++i) {
    if (tail && !q.successful[i] && q.action[i] != Action::kSafe) return false;
    if (!tail && q.action[i] != Action::kRisky) return false;
  }
  return true;
}

ProfilePtr make_sigma_n(const ModelParams& params, int n) {
  if (n < 0) throw InvalidParams("sigma_n needs n >= 0");
  require_prior(params);
  const int ns = n_star(params);
  auto p = std::make_shared<ScriptProfile>(
      "sigma_n", repeat({Action::kRisky, Action::kRisky}, ns + n));
  return p;
}

ProfilePtr make_sigma0(const ModelParams& params) {
  require_prior(params);
  return std::make_shared<Sigma0Profile>(n_star(params));
}

ProfilePtr make_threshold_phat(const ModelParams& params) {
  return std::make_shared<ThresholdProfile>(params);
}

ProfilePtr make_example_622(const ModelParams& params) {
  return std::make_shared<Example622Profile>(params);
}

ProfilePtr make_remark6(const ModelParams& params) {
  auto prof = std::make_shared<Remark6Profile>(params);
  // The opening R means the root payoffs never look at the S branch.
  PayoffReport r = eval_profile(params, prof);
  prof->set_roles_switch(r.gamma[0] > params.delta() * r.gamma[1]);
  return prof;
}

ProfilePtr make_public_budget(const ModelParams& params, int leader) {
  if (leader != 0 && leader != 1) throw InvalidParams("leader must be 0 or 1");
  require_prior(params);
  return std::make_shared<PublicBudgetProfile>(n_star(params), leader);
}

// --- mixed example ---------------------------------------------------------

MixedExampleProfile::MixedExampleProfile(const ModelParams&, double alpha,
                                         double beta)
    : alpha_(alpha), beta_(beta) {}

std::string MixedExampleProfile::parameters() const {
  return "alpha=" + fmt(alpha_) + ",beta=" + fmt(beta_);
}

double MixedExampleProfile::prob_risky(const NodeContext& ctx) const {
  const auto& h = ctx.actions();
  std::size_t k = 0;
  while (k < h.size() && h[k] == Action::kSafe) ++k;
  const std::size_t rest = h.size() - k;
  // only player 1 opens; player 2 waits at (SS)^n S
  if (rest == 0) return k % 2 == 0 ? 1.0 : 0.0;
  auto at = [&](std::size_t i) { return h[k + i]; };
  if (rest == 2 && at(0) == Action::kRisky && at(1) == Action::kSafe)
    return alpha_;
  if (rest == 3 && at(0) == Action::kRisky && at(1) == Action::kSafe &&
      at(2) == Action::kRisky)
    return beta_;
  return convinced(ctx) ? 1.0 : 0.0;
}

std::optional<bool> MixedExampleProfile::settled(const NodeContext& ctx,
                                                 const SettleQuery& q) const {
  return frozen_play(ctx, q);
}

void MixedExampleProfile::check_hypotheses(const ModelParams& params) {
  const double ps = cutoff_p_star(params);
  const double ph = cutoff_p_hat(params);
  const double ph1 = cutoff_p_hat_n(params, 1);
  const double fps = phi(ps, params);
  if (!(fps > ph && fps < ph1)) {
    throw HypothesisViolated("phi(p*) = " + fmt(fps) + " is not inside (p_hat, p_hat_1) = (" +
                             fmt(ph) + ", " + fmt(ph1) + ")");
  }
  const double hi = std::min(cutoff_p_star_n(params, 1), phi_inverse(ph1, params));
  if (!(params.p0() > ps && params.p0() < hi)) {
    throw HypothesisViolated("p0 = " + fmt(params.p0()) +
                             " is not inside (p*, min(p*_1, phi^-1(p_hat_1))) = (" +
                             fmt(ps) + ", " + fmt(hi) + ")");
  }
}

double MixedExampleProfile::alpha_formula(const ModelParams& params) {
  const double p0 = params.p0();
  const double l = params.lambda();
  const double ps2 = cutoff_p_star_n(params, 2);
  return p0 * l * (1 - ps2) / (p0 * l * (1 - ps2) + (ps2 - p0));
}

double MixedExampleProfile::indifference_gap(const ModelParams& params,
                                             double alpha, double beta) {
  auto prof = std::make_shared<MixedExampleProfile>(params, alpha, beta);
  GameTree tree(params, prof);
  Evaluator ev(tree);
  const NodeId rs = tree.find("RS");
  return ev.action_value(rs, Action::kRisky) - ev.action_value(rs, Action::kSafe);
}

std::shared_ptr<const MixedExampleProfile> make_mixed_example(
    const ModelParams& params) {
  MixedExampleProfile::check_hypotheses(params);
  const double alpha = MixedExampleProfile::alpha_formula(params);
  auto gap = [&](double b) {
    return MixedExampleProfile::indifference_gap(params, alpha, b);
  };
  double lo = 0.0, hi = 1.0;
  double f_lo = gap(lo), f_hi = gap(hi);
  if (!(f_lo < 0.0 && f_hi > 0.0)) {
    throw RootNotBracketed("indifference gap at beta = 0, 1: " + fmt(f_lo) +
                           ", " + fmt(f_hi));
  }
  // The gap is affine in beta, so false position lands on the root at once;
  // the loop guards against rounding.
  double beta = lo, f = f_lo;
  for (int it = 0; it < 100; ++it) {
    beta = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    f = gap(beta);
    if (std::abs(f) < 1e-14 || hi - lo < 1e-15) break;
    if (f < 0) {
      lo = beta;
      f_lo = f;
    } else {
      hi = beta;
      f_hi = f;
    }
  }
  auto prof = std::make_shared<MixedExampleProfile>(params, alpha, beta);
  prof->residual_ = f;
  return prof;
}

// --- public Markov ---------------------------------------------------------

PublicMarkovProfile::PublicMarkovProfile(const ModelParams& params)
    : params_(params) {
  const double ps = cutoff_p_star(params);
  const double l = params.lambda(), d = params.delta(), g = params.g();
  // rungs down to the first belief at or below p*, whose values are zero
  std::vector<Rung> rungs;
  Belief b = Belief::from_probability(params.p0());
  for (;;) {
    Rung r;
    r.p = b.value();
    rungs.push_back(r);
    const CutoffTest t = compare_to_cutoff(r.p, ps);
    if (t.near_tie) warn("GenericityViolation: ladder belief within band of p*");
    if (r.p <= ps) break;
    b = phi(b, params);
  }
  for (int k = static_cast<int>(rungs.size()) - 2; k >= 0; --k) {
    Rung& r = rungs[k];
    const Rung& next = rungs[k + 1];
    const double p = r.p;
    r.gamma1 = (1 - d) * (p * l * params.m() - params.c()) +
               d * (p * l * g + (1 - p * l) * next.gamma2);
    const double a = p * l * g + (1 - p * l) * next.gamma1;
    // delta * (f a + (1 - f) gamma1) = gamma1 is linear in f
    double f = a > r.gamma1 ? r.gamma1 * (1 - d) / (d * (a - r.gamma1)) : 1.0;
    if (!(f < 1.0)) f = 1.0;
    if (f <= 0.0) {
      warn("interior solution is not positive at rung " + std::to_string(k));
      f = 0.0;
    }
    r.f = f;
    r.gamma2 = f * a + (1 - f) * r.gamma1;
  }
  ladder_ = std::move(rungs);
}

bool PublicMarkovProfile::is_pure() const {
  for (const auto& r : ladder_) {
    if (r.f != 0.0 && r.f != 1.0) return false;
  }
  return true;
}

double PublicMarkovProfile::f_at(int n_e) const {
  if (n_e >= static_cast<int>(ladder_.size())) return 0.0;
  return ladder_[n_e].f;
}

double PublicMarkovProfile::prob_risky(const NodeContext& ctx) const {
  return f_at(ctx.counters().n_e());
}

std::optional<bool> PublicMarkovProfile::settled(const NodeContext& ctx,
                                                 const SettleQuery& q) const {
  bool growing = false;
  for (int i = 0; i < 2; ++i) {
    if (q.successful[i]) {
      growing = true;
      continue;
    }
    if (q.action[i] != Action::kSafe) return false;
  }
  const int ne = ctx.counters().n_e();
  if (growing) return ne + 1 >= static_cast<int>(ladder_.size());
  return f_at(ne) == 0.0;
}

double PublicMarkovProfile::residual(int k) const {
  const Rung& r = ladder_.at(k);
  if (r.f == 0.0) return 0.0;
  const double l = params_.lambda(), d = params_.delta(), g = params_.g();
  const Rung& next = ladder_.at(k + 1);
  const double p = r.p;
  const double g1 = (1 - d) * (p * l * params_.m() - params_.c()) +
                    d * (p * l * g + (1 - p * l) * next.gamma2);
  const double g2 = r.f * (p * l * g + (1 - p * l) * next.gamma1) +
                    (1 - r.f) * g1;
  return r.f < 1.0 ? g1 - d * g2 : std::min(0.0, g1 - d * g2);
}

std::shared_ptr<const PublicMarkovProfile> make_public_markov(
    const ModelParams& params) {
  return std::make_shared<PublicMarkovProfile>(params);
}

// --- pure sequential equilibrium with belief revision on deviation ---------

ProfilePtr make_gamma_r_scenario(const ModelParams& params, int r) {
  const int ns = n_star(params);
  if (r < 0 || r > ns) throw InvalidParams("r must lie in 0..N*");
  auto script = repeat({Action::kRisky, Action::kSafe}, r);
  auto tail = repeat({Action::kRisky, Action::kRisky}, ns - r);
  script.insert(script.end(), tail.begin(), tail.end());
  script.push_back(Action::kSafe);
  return std::make_shared<ScriptProfile>("gamma_r:r=" + std::to_string(r),
                                         std::move(script));
}

AppendixBProfile::AppendixBProfile(const ModelParams& params,
                                   std::vector<double> gamma_r)
    : params_(params), gamma_r_(std::move(gamma_r)) {
  n_star_ = static_cast<int>(gamma_r_.size()) - 1;
  const double best = *std::max_element(gamma_r_.begin(), gamma_r_.end());
  const double tol = 1e-12 * (1.0 + std::abs(best));
  r0_ = 0;
  while (gamma_r_[r0_] < best - tol) ++r0_;
  wait_.assign(gamma_r_.size(), false);
  double suffix = -std::numeric_limits<double>::infinity();
  for (int r = n_star_; r >= 0; --r) {
    suffix = std::max(suffix, gamma_r_[r]);
    wait_[r] = gamma_r_[r] < suffix - tol;
  }
}

std::string AppendixBProfile::parameters() const {
  return "r0=" + std::to_string(r0_) + ",roles_switch=" + (switch_ ? "1" : "0");
}

double AppendixBProfile::rooted_prob(const NodeContext& ctx) const {
  const int i = ctx.active_player();
  const PlayerBelief& b = ctx.belief(i);
  const double ps = cutoff_p_star(params_);
  const bool above = b.p.is_certain() || at_or_above(b.p.value(), ps);
  if (i == 0) return above ? 1.0 : 0.0;
  if (!above) return 0.0;
  // player 2 may hold back at (RS)^r R while a later start pays more
  const auto& h = ctx.actions();
  if (h.size() % 2 == 1) {
    const int r = static_cast<int>(h.size() / 2);
    bool shape = r < n_star_;
    for (int t = 0; shape && t < r; ++t) {
      shape = h[2 * t] == Action::kRisky && h[2 * t + 1] == Action::kSafe;
    }
    if (shape && wait_[r]) return 0.0;
  }
  return 1.0;
}

double AppendixBProfile::prob_risky(const NodeContext& ctx) const {
  const auto& h = ctx.actions();
  if (h.empty()) return 1.0;
  if (h[0] == Action::kSafe) return shifted_prob(ctx, switch_);
  return rooted_prob(ctx);
}

std::optional<bool> AppendixBProfile::settled(const NodeContext& ctx,
                                              const SettleQuery& q) const {
  return frozen_play(ctx, q);
}

std::shared_ptr<const AppendixBProfile> make_appendixB_SE(
    const ModelParams& params) {
  require_prior(params);
  const int ns = n_star(params);
  std::vector<double> gamma;
  for (int r = 0; r <= ns; ++r) {
    gamma.push_back(eval_profile(params, make_gamma_r_scenario(params, r)).gamma[1]);
  }
  auto prof = std::make_shared<AppendixBProfile>(params, std::move(gamma));
  PayoffReport rep = eval_profile(params, prof);
  prof->set_roles_switch(rep.gamma[0] >= params.delta() * rep.gamma[1]);
  return prof;
}

// --- name registry ---------------------------------------------------------

std::vector<std::string> catalog_names() {
  return {"sigma_n",      "threshold_phat", "example_622",  "remark6",
          "mixed_example", "public_markov",  "appendixB_SE"};
}

ProfilePtr make_profile(const std::string& spec, const ModelParams& params) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::map<std::string, std::string> args;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw ParseError(colon + 1, "expected key=value in '" + kv + "'");
      }
      args[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  auto int_arg = [&](const std::string& key, int fallback) {
    auto it = args.find(key);
    if (it == args.end()) return fallback;
    try {
      return std::stoi(it->second);
    } catch (const std::exception&) {
      throw ParseError(0, "bad integer for " + key + ": " + it->second);
    }
  };
  if (name == "sigma_n") return make_sigma_n(params, int_arg("n", 0));
  if (name == "sigma0") return make_sigma0(params);
  if (name == "threshold_phat") return make_threshold_phat(params);
  if (name == "example_622" || name == "622") return make_example_622(params);
  if (name == "remark6") return make_remark6(params);
  if (name == "mixed_example") return make_mixed_example(params);
  if (name == "public_markov") return make_public_markov(params);
  if (name == "appendixB_SE") return make_appendixB_SE(params);
  if (name == "public_sigma1") return make_public_budget(params, 0);
  if (name == "public_sigma2") return make_public_budget(params, 1);
  if (name == "gamma_r") return make_gamma_r_scenario(params, int_arg("r", 0));
  if (name == "script") {
    auto it = args.find("h");
    if (it == args.end()) throw ParseError(0, "script needs h=<history>");
    return std::make_shared<ScriptProfile>("script", parse_actions(it->second));
  }
  throw ParseError(0, "unknown profile '" + name + "'");
}

}  // namespace stratexp
