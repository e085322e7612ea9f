#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "stratexp/params.hpp"

namespace stratexp {

// CSV with a versioned "# format: stratexp/<kind>/v1" header line.
class CsvTable {
 public:
  CsvTable(std::string kind, std::vector<std::string> columns);
  void meta(const std::string& key, const std::string& value);
  void row(std::vector<std::string> cells);
  std::size_t size() const { return rows_.size(); }
  void write(std::ostream& os) const;
  std::string str() const;

 private:
  std::string kind_;
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fmt_num(double x);

// Random valid parameters: lambda, delta in (0.01, 0.99), c in (0.1, 2),
// g/c in (0.05, 10), p0 in (0.01, 0.99).
ModelParams sample_params(std::mt19937_64& rng);

struct OrderingReport {
  int points = 0;
  std::map<std::string, int> violations;
  int limit_within_at_200 = 0;  // points with |p*_200 - p_myop| < 1e-4
  double seconds = 0.0;
  bool pass() const;
};
OrderingReport cutoff_ordering_suite(int points, std::uint64_t seed);

struct TargetResult {
  std::string target;
  CsvTable table;
  std::string summary;
  bool pass = true;
  std::map<std::string, double> numbers;  // headline values for tests
};

const std::vector<std::string>& reproduce_targets();
// Throws InvalidParams for an unknown target.
TargetResult reproduce(const std::string& target);

}  // namespace stratexp
