#include "stratexp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include <json.hpp>

#include "stratexp/closed_forms.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/strategies.hpp"
#include "stratexp/verify.hpp"

namespace stratexp {

namespace {

using nlohmann::json;

std::pair<int, int> line_col(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Semantic errors point at the first occurrence of the offending token.
[[noreturn]] void fail_at(const std::string& text, const std::string& token,
                          const std::string& what) {
  const auto pos = token.empty() ? std::string::npos : text.find(token);
  const auto [l, c] = line_col(text, pos == std::string::npos ? 0 : pos);
  throw ConfigError(l, c, what);
}

const std::vector<std::string> kParams{"lambda", "delta", "c", "m", "p0"};

const std::vector<std::string> kCutoffFields{
    "p_star", "p_star_social", "p_tilde", "p_hat", "p_myop", "p_bar",
    "N_star", "N_star_social", "N_tilde", "N_hat"};

bool known_metric(const std::string& m) {
  if (std::find(kCutoffFields.begin(), kCutoffFields.end(), m) != kCutoffFields.end()) return true;
  if (m == "thm5_condition") return true;
  for (const char* pre : {"p_star_n:", "p_hat_n:", "nash:", "nash_brute:", "cor7:", "ne:",
                          "verdict:"}) {
    if (m.rfind(pre, 0) == 0 && m.size() > std::string(pre).size()) return true;
  }
  return false;
}

int int_suffix(const std::string& m) { return std::stoi(m.substr(m.find(':') + 1)); }

std::string metric_value(const ModelParams& pr, const CutoffSet& cs, const std::string& m) {
  if (m == "p_star") return fmt_num(cs.p_star);
  if (m == "p_star_social") return fmt_num(cs.p_star_social);
  if (m == "p_tilde") return fmt_num(cs.p_tilde);
  if (m == "p_hat") return fmt_num(cs.p_hat);
  if (m == "p_myop") return fmt_num(cs.p_myop);
  if (m == "p_bar") return fmt_num(cs.p_bar);
  if (m == "N_star") return std::to_string(cs.N_star);
  if (m == "N_star_social") return std::to_string(cs.N_star_social);
  if (m == "N_tilde") return std::to_string(cs.N_tilde);
  if (m == "N_hat") return std::to_string(cs.N_hat);
  if (m.rfind("p_star_n:", 0) == 0) return fmt_num(cutoff_p_star_n(pr, int_suffix(m)));
  if (m.rfind("p_hat_n:", 0) == 0) return fmt_num(cutoff_p_hat_n(pr, int_suffix(m)));
  if (m.rfind("nash:", 0) == 0) return cp1_sigma_n(pr, int_suffix(m)) >= 0 ? "1" : "0";
  if (m.rfind("nash_brute:", 0) == 0) {
    return nash_check_sigma_n(pr, int_suffix(m)).brute_force ? "1" : "0";
  }
  if (m.rfind("cor7:", 0) == 0) return corollary7_condition(pr, int_suffix(m)) ? "1" : "0";
  if (m == "thm5_condition") {
    if (cs.N_hat < 1) return "n/a";
    return phi_iterate(pr.p0(), cs.N_hat - 1, pr) >= cutoff_p_star_n(pr, cs.N_hat) ? "1" : "0";
  }
  if (m.rfind("ne:", 0) == 0) {
    const PayoffReport r = eval_profile(pr, make_profile(m.substr(3), pr));
    double mean = 0.0;
    for (const auto& [k, w] : r.ne_given_bad) {
      if (k == kNeverSettles && w > 0) return "inf";
      mean += k * w;
    }
    return fmt_num(mean);
  }
  if (m.rfind("verdict:", 0) == 0) {
    std::string spec = m.substr(8);
    OneShotOptions o;
    if (const auto at = spec.rfind('@'); at != std::string::npos) {
      o.depth = std::stoi(spec.substr(at + 1));
      spec = spec.substr(0, at);
    } else {
      o.depth = std::min(2 * (cs.N_hat + 3), 16);
    }
    return one_shot_deviation_check(pr, make_profile(spec, pr), o).pass ? "PASS" : "FAIL";
  }
  throw InvalidParams("unknown metric " + m);
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

bool corollary7_condition(const ModelParams& params, int n) {
  const int ns = compute_cutoffs(params, 0).N_star;
  const double lam = params.lambda();
  return (n + 1) * lam + std::pow(1 - lam, 2 * n + ns + 2) < 1;
}

SweepSpec parse_sweep(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError(l, c, "malformed JSON");
  }
  if (!j.is_object()) throw ConfigError(1, 1, "expected a JSON object");
  SweepSpec s;
  try {
    s.name = j.value("name", std::string("sweep"));
    if (!j.contains("base")) fail_at(text, "", "missing \"base\"");
    s.base = j.at("base").get<std::string>();
    try {
      ModelParams::parse(s.base);
    } catch (const Error& e) {
      fail_at(text, "\"base\"", e.what());
    }
    s.hold_g = j.value("hold_g", false);
    s.threads = j.value("threads", 0);
    if (!j.contains("axes") || !j.at("axes").is_array()) {
      fail_at(text, "\"axes\"", "\"axes\" must be an array");
    }
    for (const auto& a : j.at("axes")) {
      SweepSpec::Axis ax;
      ax.param = a.at("param").get<std::string>();
      if (std::find(kParams.begin(), kParams.end(), ax.param) == kParams.end()) {
        fail_at(text, "\"" + ax.param + "\"", "unknown parameter '" + ax.param + "'");
      }
      if (a.contains("values")) {
        ax.values = a.at("values").get<std::vector<double>>();
      } else {
        const double from = a.at("from").get<double>(), to = a.at("to").get<double>();
        const int steps = a.at("steps").get<int>();
        if (steps < 1) fail_at(text, "\"steps\"", "steps must be >= 1");
        for (int k = 0; k < steps; ++k) {
          ax.values.push_back(steps == 1 ? from : from + (to - from) * k / (steps - 1));
        }
      }
      if (ax.values.empty()) fail_at(text, "\"" + ax.param + "\"", "axis has no values");
      s.axes.push_back(std::move(ax));
    }
    if (!j.contains("metrics") || !j.at("metrics").is_array() || j.at("metrics").empty()) {
      fail_at(text, "\"metrics\"", "\"metrics\" must be a non-empty array");
    }
    for (const auto& m : j.at("metrics")) {
      const auto name = m.get<std::string>();
      if (!known_metric(name)) fail_at(text, "\"" + name + "\"", "unknown metric '" + name + "'");
      s.metrics.push_back(name);
    }
  } catch (const json::exception& e) {
    throw ConfigError(1, 1, std::string("bad field: ") + e.what());
  }
  return s;
}

CsvTable run_sweep(const SweepSpec& spec) {
  const ModelParams base = ModelParams::parse(spec.base);
  std::vector<std::string> cols;
  for (const auto& p : kParams) cols.push_back(p);
  for (const auto& m : spec.metrics) cols.push_back(csv_cell(m));
  CsvTable table("sweep", cols);
  table.meta("name", spec.name);
  table.meta("base", spec.base);

  // grid points in declared axis order, first axis outermost
  std::vector<std::vector<double>> points{{}};
  for (const auto& ax : spec.axes) {
    std::vector<std::vector<double>> next;
    for (const auto& pt : points) {
      for (double v : ax.values) {
        auto q = pt;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }

  std::vector<std::vector<std::string>> rows(points.size());
  auto work = [&](std::size_t idx) {
    std::array<double, 5> v{base.lambda(), base.delta(), base.c(), base.m(), base.p0()};
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      const auto k = std::find(kParams.begin(), kParams.end(), spec.axes[a].param) - kParams.begin();
      v[k] = points[idx][a];
    }
    if (spec.hold_g) v[3] = (v[2] + base.g()) / v[0];
    std::vector<std::string>& row = rows[idx];
    for (double x : v) row.push_back(fmt_num(x));
    std::optional<ModelParams> pr;
    try {
      pr.emplace(v[0], v[1], v[2], v[3], v[4]);
    } catch (const Error&) {
      row.resize(cols.size(), "invalid");
      return;
    }
    const CutoffSet cs = compute_cutoffs(*pr, 0);
    for (const auto& m : spec.metrics) {
      try {
        row.push_back(metric_value(*pr, cs, m));
      } catch (const Error&) {
        row.push_back("n/a");
      }
    }
  };

  unsigned nt = spec.threads > 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  nt = std::min<unsigned>(nt, std::max<std::size_t>(1, points.size()));
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < nt; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < points.size();) work(i);
      });
    }
  }
  for (auto& r : rows) table.row(std::move(r));
  return table;
}

}  // namespace stratexp
