#include "stratexp/belief_update.hpp"

namespace stratexp {

std::string to_string(BeliefMode mode) {
  return mode == BeliefMode::kReasonable ? "reasonable" : "appendixB";
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kPrior: return "prior";
    case Provenance::kBayes: return "bayes";
    case Provenance::kReasonableRule: return "reasonable-rule";
    case Provenance::kConviction: return "success-conviction";
    case Provenance::kOffPathRule: return "off-path-rule";
  }
  return "?";
}

BeliefPair initial_beliefs(const ModelParams& params) {
  BeliefPair b;
  for (auto& pb : b.player) {
    pb.p = Belief::from_probability(params.p0());
    pb.q = 0.0;
    pb.provenance = Provenance::kPrior;
  }
  return b;
}

namespace {

PlayerBelief convinced() {
  return {Belief::certain(), 1.0, Provenance::kConviction};
}

// Observer's update after an R that has probability x > 0 for the
// never-successful active player.
PlayerBelief bayes_after_risky(const PlayerBelief& b, double x, double lambda) {
  const double q = b.q;
  PlayerBelief out;
  out.p = Belief::from_lr(b.p.lr() * (q / x + (1.0 - q)));
  out.q = (q + (1.0 - q) * x * lambda) / (q + (1.0 - q) * x);
  out.provenance = Provenance::kBayes;
  return out;
}

PlayerBelief bayes_after_safe(const PlayerBelief& b) {
  return {Belief::from_lr(b.p.lr() * (1.0 - b.q)), 0.0, Provenance::kBayes};
}

PlayerBelief reasonable_observer(const PlayerBelief& b,
                                 const HistoryCounters& h, Action a,
                                 double x, const ModelParams& params) {
  if (a == Action::kSafe) {
    return {phi_iterate(Belief::from_probability(params.p0()), h.n_e(), params),
            0.0, x < 1.0 ? Provenance::kBayes : Provenance::kReasonableRule};
  }
  if (b.p.is_certain()) return b;
  if (x > 0.0) return bayes_after_risky(b, x, params.lambda());
  if (b.q > 0.0) return convinced();
  // R after the active player revealed no experiment: uninformative.
  return {b.p, params.lambda(), Provenance::kReasonableRule};
}

PlayerBelief appendix_b_observer(const PlayerBelief& b,
                                 const PlayerBelief& active,
                                 const HistoryCounters& h, Action a, double x,
                                 const ModelParams& params) {
  if (b.p.is_certain()) return b;
  auto uninformative = [&]() {
    PlayerBelief out = b;
    out.q = a == Action::kRisky ? b.q + (1.0 - b.q) * params.lambda() : 0.0;
    out.provenance = Provenance::kOffPathRule;
    return out;
  };
  if (active.p.is_certain()) return uninformative();
  const bool consistent = a == Action::kRisky ? x > 0.0 : x < 1.0;
  if (consistent) {
    return a == Action::kRisky ? bayes_after_risky(b, x, params.lambda())
                               : bayes_after_safe(b);
  }
  const int k = h.active_player();
  if (h.n_e_i[k] >= 1) {
    PlayerBelief out = convinced();
    out.provenance = Provenance::kOffPathRule;
    return out;
  }
  return uninformative();
}

}  // namespace

BeliefPair next_beliefs(const BeliefPair& at_h, const HistoryCounters& h,
                        Action a, double sigma_h, BeliefMode mode,
                        const ModelParams& params) {
  const int k = h.active_player();
  const int o = other_player(k);
  BeliefPair out = at_h;

  PlayerBelief& own = out.player[k];
  if (a == Action::kRisky && !own.p.is_certain()) {
    own.p = phi(own.p, params);
    own.provenance = Provenance::kBayes;
  }

  const PlayerBelief& seen = at_h.player[o];
  out.player[o] =
      mode == BeliefMode::kReasonable
          ? reasonable_observer(seen, h, a, sigma_h, params)
          : appendix_b_observer(seen, at_h.player[k], h, a, sigma_h, params);
  return out;
}

}  // namespace stratexp
