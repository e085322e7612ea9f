#pragma once

#include <cstdint>
#include <string>

#include "stratexp/history.hpp"
#include "stratexp/params.hpp"

namespace stratexp {

enum class BeliefMode : std::uint8_t { kReasonable, kAppendixB };

enum class Provenance : std::uint8_t {
  kPrior,
  kBayes,
  kReasonableRule,
  kConviction,
  kOffPathRule,
};

std::string to_string(BeliefMode mode);
std::string to_string(Provenance p);

// Belief of a never-successful player: p = P(G), q = P(other successful | G).
struct PlayerBelief {
  Belief p;
  double q = 0.0;
  Provenance provenance = Provenance::kPrior;
};

struct BeliefPair {
  PlayerBelief player[2];
};

BeliefPair initial_beliefs(const ModelParams& params);

// Beliefs at h·a from beliefs at h, where sigma_h is the probability that the
// never-successful active player picks R at h.
BeliefPair next_beliefs(const BeliefPair& at_h, const HistoryCounters& h,
                        Action a, double sigma_h, BeliefMode mode,
                        const ModelParams& params);

}  // namespace stratexp
