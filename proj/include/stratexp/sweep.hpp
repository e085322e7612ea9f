#pragma once

#include <string>
#include <vector>

#include "stratexp/errors.hpp"
#include "stratexp/experiments.hpp"

namespace stratexp {

// Malformed sweep configuration, located in the source text.
class ConfigError : public Error {
 public:
  ConfigError(int line, int column, const std::string& what)
      : Error("config error at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

// A JSON sweep config:
//   {"name": ..., "base": "lambda,delta,c,m,p0",
//    "axes": [{"param": "lambda", "from": a, "to": b, "steps": k} |
//             {"param": "p0", "values": [...]}],
//    "hold_g": false, "threads": 0,
//    "metrics": ["p_star", "N_hat", "p_star_n:3", "ne:sigma0",
//                "verdict:threshold_phat@8", "nash:2", "nash_brute:2",
//                "cor7:2", "thm5_condition"]}
// With hold_g, m is recomputed as (c + g) / lambda so g stays at its base value.
struct SweepSpec {
  std::string name;
  std::string base;
  struct Axis {
    std::string param;
    std::vector<double> values;
  };
  std::vector<Axis> axes;
  bool hold_g = false;
  int threads = 0;  // 0: hardware concurrency
  std::vector<std::string> metrics;
};

// Throws ConfigError.
SweepSpec parse_sweep(const std::string& text);
CsvTable run_sweep(const SweepSpec& spec);

// Sufficient condition for sigma_n to be Nash when delta is close to 1:
// (n + 1) lambda + (1 - lambda)^(2n + N* + 2) < 1.
bool corollary7_condition(const ModelParams& params, int n);

}  // namespace stratexp
