#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "stratexp/profile.hpp"

namespace stratexp {

struct SimConfig {
  std::int64_t runs = 100000;
  std::uint64_t seed = 1;
  int horizon = 0;  // half-periods; 0 picks one where delta^(h/2) < 1e-12
  std::string profile = "sigma0";
  std::optional<bool> force_good;  // draw theta from p0 when empty
};

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t count = 0;
};

struct SimResult {
  std::string profile;
  std::string params;
  std::uint64_t seed = 0;
  std::int64_t runs = 0;
  int horizon = 0;
  std::array<Estimate, 2> gamma;
  std::array<Estimate, 2> given_good, given_bad;
  // N_e counts per state; kNeverSettles when R is still played late.
  std::map<int, std::int64_t> ne_given_bad, ne_given_good;
  std::int64_t settled_safe = 0;   // both players end on S
  std::int64_t settled_risky = 0;  // both players end on R
  std::int64_t settled_split = 0;  // one R forever, the other S forever

  void write_csv(std::ostream& os) const;  // N_e histogram
  std::string to_json() const;
};

int default_horizon(double delta);

SimResult run_sim(const ModelParams& params, std::shared_ptr<const StrategyProfile> profile,
                  const SimConfig& cfg);
// Builds the profile from cfg.profile.
SimResult run_sim(const ModelParams& params, const SimConfig& cfg);

}  // namespace stratexp
