// stratexp: cutoffs, exact evaluation, verification, simulation, sweeps and
// the reproduce harness.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stratexp/beliefs.hpp"
#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"
#include "stratexp/evaluator.hpp"
#include "stratexp/experiments.hpp"
#include "stratexp/simulate.hpp"
#include "stratexp/strategies.hpp"
#include "stratexp/sweep.hpp"
#include "stratexp/verify.hpp"

using namespace stratexp;
using nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct Common {
  std::string params = "0.2,0.9,1,10,0.6";
  std::string profile = "sigma0";
  std::string config;
  std::string out;
  int depth = 0;
  std::optional<std::uint64_t> seed;
  std::int64_t runs = 100000;
  int horizon = 0;
  bool json = false;
};

// Fills fields not given on the command line from a JSON config file.
void apply_config(Common& c, const CLI::App& sub) {
  if (c.config.empty()) return;
  std::ifstream in(c.config);
  if (!in) throw InvalidParams("cannot read config " + c.config);
  std::stringstream ss;
  ss << in.rdbuf();
  ordered_json j;
  try {
    j = ordered_json::parse(ss.str());
  } catch (const ordered_json::parse_error& e) {
    throw InvalidParams("config " + c.config + ": " + e.what());
  }
  auto unset = [&](const char* flag) { return sub.count(flag) == 0; };
  if (j.contains("params") && unset("--params")) c.params = j["params"].get<std::string>();
  if (j.contains("profile") && unset("--profile")) c.profile = j["profile"].get<std::string>();
  if (j.contains("depth") && unset("--depth")) c.depth = j["depth"].get<int>();
  if (j.contains("seed") && unset("--seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("runs") && unset("--runs")) c.runs = j["runs"].get<std::int64_t>();
  if (j.contains("horizon") && unset("--horizon")) c.horizon = j["horizon"].get<int>();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw InvalidParams("cannot write " + c.out);
  f << text;
}

std::string yn(bool b) { return b ? "PASS" : "FAIL"; }

int cmd_cutoffs(const Common& c) {
  const ModelParams pr = ModelParams::parse(c.params);
  const int nmax = c.depth > 0 ? c.depth : 10;
  const CutoffSet cs = compute_cutoffs(pr, nmax);
  struct Check {
    std::string name;
    bool ok;
  };
  bool inc_s = true, inc_h = true;
  for (int n = 1; n <= nmax; ++n) {
    inc_s = inc_s && cs.p_star_n[n] >= cs.p_star_n[n - 1];
    inc_h = inc_h && cs.p_hat_n[n] >= cs.p_hat_n[n - 1];
  }
  const std::vector<Check> checks{
      {"p_tilde < p_hat < p_star", cs.p_tilde < cs.p_hat && cs.p_hat < cs.p_star},
      {"phi^2(p_hat) < p_social < p_hat",
       phi_iterate(cs.p_hat, 2, pr) < cs.p_star_social && cs.p_star_social < cs.p_hat},
      {"p_social <= p_bar < p_hat", cs.p_star_social <= cs.p_bar && cs.p_bar < cs.p_hat},
      {"p_star_n nondecreasing", inc_s},
      {"p_hat_n nondecreasing", inc_h}};
  std::ostringstream os;
  if (c.json) {
    ordered_json j;
    j["format"] = "stratexp/cutoffs/v1";
    j["params"] = pr.to_string();
    j["p_star"] = cs.p_star;
    j["p_star_social"] = cs.p_star_social;
    j["p_tilde"] = cs.p_tilde;
    j["p_hat"] = cs.p_hat;
    j["p_myop"] = cs.p_myop;
    j["p_bar"] = cs.p_bar;
    j["N_star"] = cs.N_star;
    j["N_star_social"] = cs.N_star_social;
    j["N_tilde"] = cs.N_tilde;
    j["N_hat"] = cs.N_hat;
    j["p_hat_n"] = cs.p_hat_n;
    j["p_star_n"] = cs.p_star_n;
    j["genericity_flag"] = cs.genericity_flag;
    j["genericity_notes"] = cs.genericity_notes;
    for (const auto& ch : checks) j["checks"][ch.name] = yn(ch.ok);
    os << j.dump(2) << "\n";
  } else {
    os << "params         " << pr.to_string() << "\n";
    os << "p_star         " << fmt_num(cs.p_star) << "\n";
    os << "p_star_social  " << fmt_num(cs.p_star_social) << "\n";
    os << "p_tilde        " << fmt_num(cs.p_tilde) << "\n";
    os << "p_hat          " << fmt_num(cs.p_hat) << "\n";
    os << "p_myop         " << fmt_num(cs.p_myop) << "\n";
    os << "p_bar          " << fmt_num(cs.p_bar) << "\n";
    os << "N_star         " << cs.N_star << "\n";
    os << "N_star_social  " << cs.N_star_social << "\n";
    os << "N_tilde        " << cs.N_tilde << "\n";
    os << "N_hat          " << cs.N_hat << "\n";
    os << "n,p_hat_n,p_star_n\n";
    for (int n = 0; n <= nmax; ++n) {
      os << n << "," << fmt_num(cs.p_hat_n[n]) << "," << fmt_num(cs.p_star_n[n]) << "\n";
    }
    for (const auto& ch : checks) os << yn(ch.ok) << " " << ch.name << "\n";
    for (const auto& note : cs.genericity_notes) os << "WARN " << note << "\n";
  }
  emit(c, os.str());
  return kOk;
}

int cmd_eval(const Common& c, bool unnormalized) {
  const ModelParams pr = ModelParams::parse(c.params);
  const PayoffReport r = eval_profile(pr, make_profile(c.profile, pr));
  const double scale = unnormalized ? 1.0 / (1.0 - pr.delta()) : 1.0;
  std::ostringstream os;
  if (c.json) {
    ordered_json j;
    j["format"] = "stratexp/payoffs/v1";
    j["profile"] = r.profile;
    j["params"] = r.params;
    j["normalized"] = !unnormalized;
    for (int i = 0; i < 2; ++i) {
      const std::string key = "player" + std::to_string(i + 1);
      j["gamma"][key] = r.gamma[i] * scale;
      j["given_good"][key] = r.given_good[i] * scale;
      j["given_bad"][key] = r.given_bad[i] * scale;
    }
    ordered_json h = ordered_json::object();
    for (const auto& [k, w] : r.ne_given_bad) h[k == kNeverSettles ? "inf" : std::to_string(k)] = w;
    j["ne_given_bad"] = h;
    j["settle_depth"] = r.settle_depth;
    j["nodes"] = r.nodes;
    os << j.dump(2) << "\n";
  } else {
    os << "profile " << r.profile << "\nparams " << r.params << "\n";
    os << "quantity,player1,player2\n";
    os << "gamma," << fmt_num(r.gamma[0] * scale) << "," << fmt_num(r.gamma[1] * scale) << "\n";
    os << "given_G," << fmt_num(r.given_good[0] * scale) << ","
       << fmt_num(r.given_good[1] * scale) << "\n";
    os << "given_B," << fmt_num(r.given_bad[0] * scale) << ","
       << fmt_num(r.given_bad[1] * scale) << "\n";
    os << "n_e,prob_given_B\n";
    for (const auto& [k, w] : r.ne_given_bad) {
      os << (k == kNeverSettles ? std::string("inf") : std::to_string(k)) << "," << fmt_num(w)
         << "\n";
    }
  }
  emit(c, os.str());
  return kOk;
}

int cmd_verify(const Common& c, const std::string& check, int n) {
  const ModelParams pr = ModelParams::parse(c.params);
  std::ostringstream os;
  bool pass = true;
  if (check == "one-shot") {
    auto prof = make_profile(c.profile, pr);
    OneShotOptions o;
    o.depth = c.depth > 0 ? c.depth : std::min(2 * (compute_cutoffs(pr, 0).N_hat + 3), 16);
    const DeviationReport r = one_shot_deviation_check(pr, prof, o);
    pass = r.pass;
    if (c.json) {
      os << r.to_json() << "\n";
    } else {
      r.write_csv(os);
      os << yn(r.pass) << " one-shot " << r.profile << " depth " << r.depth;
      if (r.first_failure) {
        os << " first failure at " << (r.first_failure->history.empty() ? "(root)" : r.first_failure->history)
           << " deviation " << action_char(r.first_failure->deviation);
      }
      os << "\n";
    }
  } else if (check == "nash") {
    const NashCheck r = nash_check_sigma_n(pr, n);
    pass = r.closed_form && r.brute_force;
    ordered_json j;
    j["format"] = "stratexp/nash/v1";
    j["params"] = pr.to_string();
    j["n"] = n;
    j["cp1"] = r.cp1;
    j["cp2"] = r.cp2;
    j["closed_form"] = r.closed_form;
    j["brute_force"] = r.brute_force;
    j["best_gain"] = r.best_gain;
    j["corollary7"] = corollary7_condition(pr, n);
    if (c.json) {
      os << j.dump(2) << "\n";
    } else {
      os << "cp1 " << fmt_num(r.cp1) << "\ncp2 " << fmt_num(r.cp2) << "\nbest deviation gain "
         << fmt_num(r.best_gain) << " (player " << r.best_player + 1 << ", period "
         << r.best_period << ")\n";
      os << yn(pass) << " sigma_n Nash, n = " << n << " (closed form " << yn(r.closed_form)
         << ", brute force " << yn(r.brute_force) << ")\n";
    }
  } else if (check == "thm4") {
    auto prof = make_profile(c.profile, pr);
    const int depth = c.depth > 0 ? c.depth : 2 * (compute_cutoffs(pr, 0).N_hat + 3);
    const Theorem4Report r = check_theorem4(pr, prof, depth);
    pass = r.pass();
    os << yn(r.terminal_below_p_hat) << " some player ends below p_hat\n";
    os << yn(r.no_risky_below_p_hat) << " no R below p_hat\n";
    for (const auto& v : r.violations) os << "  " << v << "\n";
  } else if (check == "thm6") {
    auto prof = make_profile(c.profile, pr);
    const Theorem6Report r = check_theorem6_bounds(pr, prof, c.depth);
    pass = r.pass();
    os << "N_social " << r.n_star_social << "\nsupport";
    for (int k : r.support) os << " " << k;
    os << "\n" << yn(r.pass()) << " N** - 2 <= N_e <= 2 N**\n";
  } else if (check == "prop6") {
    const Prop6Certificate r = prop6_certificate(pr);
    pass = r.gain > 0;
    os << "interval [" << fmt_num(r.interval_lo) << ", " << fmt_num(r.interval_hi) << ")\n";
    os << "gain " << fmt_num(r.gain) << "\nthought1 " << fmt_num(r.thought1) << "\n";
    os << yn(pass) << " deviation to RSRR is profitable\n";
  } else {
    throw InvalidParams("unknown check '" + check + "'");
  }
  emit(c, os.str());
  return pass ? kOk : kFail;
}

int cmd_simulate(const Common& c, const std::string& csv_out) {
  if (!c.seed) throw InvalidParams("simulate needs an explicit --seed");
  const ModelParams pr = ModelParams::parse(c.params);
  SimConfig cfg;
  cfg.runs = c.runs;
  cfg.seed = *c.seed;
  cfg.horizon = c.horizon;
  cfg.profile = c.profile;
  const SimResult r = run_sim(pr, cfg);
  if (!csv_out.empty()) {
    std::ofstream f(csv_out);
    if (!f) throw InvalidParams("cannot write " + csv_out);
    r.write_csv(f);
  }
  std::ostringstream os;
  if (c.json) {
    os << r.to_json() << "\n";
  } else {
    os << "profile " << r.profile << "\nparams " << r.params << "\nseed " << r.seed
       << " runs " << r.runs << " horizon " << r.horizon << "\n";
    os << "quantity,player,mean,stderr\n";
    for (int i = 0; i < 2; ++i) {
      os << "gamma," << i + 1 << "," << fmt_num(r.gamma[i].mean) << ","
         << fmt_num(r.gamma[i].stderr_) << "\n";
    }
    r.write_csv(os);
  }
  emit(c, os.str());
  return kOk;
}

int cmd_sweep(const std::string& file, const std::string& out) {
  std::ifstream in(file);
  if (!in) throw InvalidParams("cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  const SweepSpec spec = parse_sweep(ss.str());
  const CsvTable t = run_sweep(spec);
  if (out.empty()) {
    t.write(std::cout);
  } else {
    std::ofstream f(out);
    if (!f) throw InvalidParams("cannot write " + out);
    t.write(f);
  }
  return kOk;
}

int cmd_reproduce(const std::vector<std::string>& targets, const std::string& dir) {
  std::vector<std::string> list = targets;
  if (list.size() == 1 && list[0] == "all") list = reproduce_targets();
  for (const auto& t : list) {
    const auto& known = reproduce_targets();
    if (std::find(known.begin(), known.end(), t) == known.end()) {
      throw InvalidParams("unknown reproduce target '" + t + "'");
    }
  }
  const std::filesystem::path base = dir.empty() ? "reproduce_out" : dir;
  std::filesystem::create_directories(base);
  bool all = true;
  for (const auto& t : list) {
    const TargetResult r = reproduce(t);
    std::ofstream f(base / (t + ".csv"));
    r.table.write(f);
    std::cout << yn(r.pass) << " " << t << ": " << r.summary << "\n";
    all = all && r.pass;
  }
  return all ? kOk : kFail;
}

int cmd_beliefs(const Common& c, const std::string& mode, const std::string& only) {
  const ModelParams pr = ModelParams::parse(c.params);
  auto prof = make_profile(c.profile, pr);
  const int horizon = c.depth > 0 ? c.depth : 6;
  BeliefMode m = prof->belief_mode();
  if (mode == "reasonable") {
    m = BeliefMode::kReasonable;
  } else if (mode == "appendixB") {
    m = BeliefMode::kAppendixB;
  } else if (!mode.empty()) {
    throw InvalidParams("unknown belief mode '" + mode + "'");
  }
  const BeliefSystem bs(pr, prof, m, horizon);
  std::ostringstream os;
  if (only.empty()) {
    bs.write_csv(os);
  } else {
    std::vector<std::string> hs;
    std::stringstream ss(only);
    for (std::string h; std::getline(ss, h, ',');) hs.push_back(h == "-" ? "" : h);
    bs.write_csv(os, hs);
  }
  emit(c, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strategic experimentation with private payoffs"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* s, bool with_profile) {
    s->add_option("--params", c.params, "lambda,delta,c,m,p0");
    if (with_profile) s->add_option("--profile", c.profile, "name or name:key=value,...");
    s->add_option("--config", c.config, "JSON file with params/profile/depth/seed/runs");
    s->add_option("--out", c.out, "write output to this path");
    s->add_flag("--json", c.json, "machine-readable output");
  };

  auto* cut = app.add_subcommand("cutoffs", "cutoff table with ordering checks");
  add_common(cut, false);
  cut->add_option("--depth", c.depth, "largest n for p_hat_n and p*_n (default 10)");

  bool unnormalized = false;
  auto* ev = app.add_subcommand("eval", "exact payoffs and N_e distribution of a profile");
  add_common(ev, true);
  ev->add_flag("--unnormalized", unnormalized, "undo the (1 - delta) normalization");

  std::string check = "one-shot";
  int nash_n = 0;
  auto* ver = app.add_subcommand("verify", "equilibrium checks");
  add_common(ver, true);
  ver->add_option("--depth", c.depth, "one-shot depth in half-periods");
  ver->add_option("--check", check, "one-shot | nash | thm4 | thm6 | prop6")
      ->check(CLI::IsMember({"one-shot", "nash", "thm4", "thm6", "prop6"}));
  ver->add_option("--n", nash_n, "n for the sigma_n Nash check");

  std::string hist_csv;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo play");
  add_common(sim, true);
  sim->add_option("--seed", c.seed, "RNG seed (required)");
  sim->add_option("--runs", c.runs, "number of plays");
  sim->add_option("--horizon", c.horizon, "half-periods before tail classification");
  sim->add_option("--histogram", hist_csv, "write the N_e histogram CSV here");

  std::string sweep_file, sweep_out;
  auto* sw = app.add_subcommand("sweep", "grid sweep from a JSON config");
  sw->add_option("config", sweep_file, "sweep config")->required();
  sw->add_option("--out", sweep_out, "CSV path");

  std::vector<std::string> targets;
  std::string rep_dir;
  auto* rep = app.add_subcommand("reproduce", "regenerate a reference result table as CSV");
  rep->add_option("target", targets, "target name(s) or 'all'")->required();
  rep->add_option("--out", rep_dir, "output directory (default reproduce_out)");

  std::string mode, only;
  auto* bd = app.add_subcommand("beliefs-dump", "belief system as CSV");
  add_common(bd, true);
  bd->add_option("--depth", c.depth, "horizon in half-periods (default 6)");
  bd->add_option("--mode", mode, "reasonable | appendixB (default: the profile's)");
  bd->add_option("--histories", only, "comma-separated histories, '-' for the root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*cut) {
      apply_config(c, *cut);
      return cmd_cutoffs(c);
    }
    if (*ev) {
      apply_config(c, *ev);
      return cmd_eval(c, unnormalized);
    }
    if (*ver) {
      apply_config(c, *ver);
      return cmd_verify(c, check, nash_n);
    }
    if (*sim) {
      apply_config(c, *sim);
      return cmd_simulate(c, hist_csv);
    }
    if (*sw) return cmd_sweep(sweep_file, sweep_out);
    if (*rep) return cmd_reproduce(targets, rep_dir);
    if (*bd) {
      apply_config(c, *bd);
      return cmd_beliefs(c, mode, only);
    }
  } catch (const NotAnEquilibrium& e) {
    std::cerr << "FAIL " << e.what() << "\n";
    return kFail;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
