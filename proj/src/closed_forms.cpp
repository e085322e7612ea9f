#include "stratexp/closed_forms.hpp"

#include <algorithm>
#include <cmath>

#include "stratexp/cutoffs.hpp"
#include "stratexp/errors.hpp"

namespace stratexp {

namespace {

double fail_pow(const ModelParams& pr, double n) {
  return std::pow(1.0 - pr.lambda(), n);
}

double flow(double p, const ModelParams& pr) {
  return p * pr.lambda() * pr.m() - pr.c();
}

}  // namespace

OnePlayerSolution one_player_solve(double p, const ModelParams& params,
                                   double dp) {
  const double l = params.lambda(), g = params.g();
  if (p >= 1.0) return {g, -1};
  // Climb down the ladder until even a sure success afterwards cannot
  // justify one more experiment.
  std::vector<double> ladder;
  Belief b = Belief::from_probability(p);
  for (;;) {
    const double x = b.value();
    ladder.push_back(x);
    if ((1 - dp) * flow(x, params) + dp * x * g < 0) break;
    if (ladder.size() > 100000) break;
    b = phi(b, params);
  }
  double v = 0.0;
  int n = 0;
  for (int k = static_cast<int>(ladder.size()) - 1; k >= 0; --k) {
    const double x = ladder[k];
    const double risky = (1 - dp) * flow(x, params) + dp * (x * l * g + (1 - x * l) * v);
    if (risky > 0.0) {
      v = risky;
      ++n;
    } else {
      v = 0.0;
      n = 0;
    }
  }
  return {v, n};
}

double one_player_value(double p, const ModelParams& params, double dp) {
  return one_player_solve(p, params, dp).value;
}

double one_player_value(double p, const ModelParams& params) {
  return one_player_value(p, params, params.delta());
}

GridSolution one_player_value_iteration(const ModelParams& params, double dp,
                                        double step, double tol) {
  const double l = params.lambda(), g = params.g();
  const int n = static_cast<int>(std::llround(1.0 / step));
  GridSolution sol;
  sol.step = 1.0 / n;
  sol.value.assign(n + 1, 0.0);
  auto& v = sol.value;
  v[n] = g;
  auto interp = [&](double x) {
    const double pos = x * n;
    const int i = std::min(static_cast<int>(pos), n - 1);
    const double w = pos - i;
    return (1 - w) * v[i] + w * v[i + 1];
  };
  for (sol.sweeps = 1; sol.sweeps <= 1000; ++sol.sweeps) {
    double change = 0.0;
    // ascending order: phi(p) < p is already updated in this sweep
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(i) / n;
      const double risky = (1 - dp) * flow(x, params) +
                           dp * (x * l * g + (1 - x * l) * interp(phi(x, params)));
      const double nv = std::max(0.0, risky);
      change = std::max(change, std::abs(nv - v[i]));
      v[i] = nv;
    }
    if (change < tol) break;
  }
  sol.switch_belief = 1.0;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double next = x < 1.0 ? interp(phi(x, params)) : g;
    const double risky = (1 - dp) * flow(x, params) + dp * (x * l * g + (1 - x * l) * next);
    if (risky > 0.0) {
      sol.switch_belief = x;
      break;
    }
  }
  return sol;
}

namespace {

double cp_common(const ModelParams& params, int n, bool first_mover) {
  const double ps = cutoff_p_star(params);
  if (params.p0() < ps) throw PriorTooLow("cp needs p0 >= p*");
  const int ns = first_index_below(params.p0(), ps, params).n;
  const double pb = phi_iterate(params.p0(), ns, params);
  const double d = params.delta(), g = params.g();
  const double dn = std::pow(d, n);
  const double fn = fail_pow(params, n);
  const double other = fn * (1 - fail_pow(params, n + ns));
  return (1 - dn) * flow(pb, params) +
         dn * g * pb * ((1 - fn) + other * (first_mover ? d : 1.0));
}

}  // namespace

double cp1_sigma_n(const ModelParams& params, int n) {
  return cp_common(params, n, true);
}

double cp2_sigma_n(const ModelParams& params, int n) {
  return cp_common(params, n, false);
}

double thought1_payoff(double p, const ModelParams& params) {
  const double l = params.lambda(), d = params.delta();
  return (1 - d) * flow(p, params) + d * p * (l + d * (1 - l) * l) * params.g();
}

double thought1_variant_payoff(double p, int n, const ModelParams& params) {
  const double l = params.lambda(), d = params.delta(), g = params.g();
  return (1 - d) * flow(p, params) + d * p * l * g +
         d * d * p * (1 - l) * (1 - fail_pow(params, n + 1)) * g -
         d * p * (1 - fail_pow(params, n)) * g;
}

double thought2_payoff(double p, int n, const ModelParams& params) {
  const double l = params.lambda(), d = params.delta();
  return (1 - d) * flow(p, params) + d * p * l * fail_pow(params, n) * params.g();
}

AppendixD appendixD_payoffs(double p, double q, int k, const ModelParams& pr) {
  const double d = pr.delta(), g = pr.g();
  const double fk = fail_pow(pr, k), fk1 = fail_pow(pr, k + 1);
  const double dk = std::pow(d, k), dk1 = std::pow(d, k + 1);
  AppendixD out;
  out.cps = d * p * g * q;
  out.ctnK1 = flow(p, pr) * (1 - dk1) +
              dk1 * p * g * ((1 - fk1) + fk1 * (q + (1 - q) * (1 - fk)));
  out.ctnK21 = flow(p, pr) * (1 - dk) + dk * p * g * ((1 - fk) + d * fk * (1 - fk));
  out.ctnN = flow(p, pr) * (1 - dk) +
             dk * p * g * ((1 - fk) + d * fk * (q + (1 - q) * (1 - fk)));
  return out;
}

double rr_then_stop_value(double p, int u_j, int k, const ModelParams& pr) {
  const double d = pr.delta(), g = pr.g();
  const double dk = std::pow(d, k), fk = fail_pow(pr, k);
  return (1 - dk) * flow(p, pr) +
         dk * p * g * ((1 - fk) + d * fk * (1 - fail_pow(pr, k + u_j)));
}

double safe_then_rr_value(double p, int u_j, int k, const ModelParams& pr) {
  const double d = pr.delta(), g = pr.g();
  const double dk = std::pow(d, k), fk = fail_pow(pr, k);
  return d * ((1 - dk) * flow(p, pr) +
              dk * p * g * ((1 - fk) + fk * (1 - fail_pow(pr, k + u_j))));
}

double k_experiments_value(double p, int k, const ModelParams& pr) {
  const double dk = std::pow(pr.delta(), k);
  return (1 - dk) * flow(p, pr) + dk * p * pr.g() * (1 - fail_pow(pr, k));
}

Lemma10 lemma10_criteria(double p, int u_j, int k, const ModelParams& params) {
  if (k < 1) throw InvalidParams("criteria need k >= 1");
  Lemma10 out;
  const double pk1 = phi_iterate(p, k - 1, params);
  const double pk = phi_iterate(p, k, params);
  out.prefer_now_vs_delay = pk1 >= cutoff_p_star(params);
  out.prefer_k_vs_kminus1 = pk1 >= cutoff_p_hat_n(params, u_j + k - 1);
  out.prefer_extra_RS = pk >= cutoff_p_star_n(params, u_j + k);
  const double vk = rr_then_stop_value(p, u_j, k, params);
  out.diff_now_vs_delay = vk - safe_then_rr_value(p, u_j, k, params);
  out.diff_k_vs_kminus1 = vk - rr_then_stop_value(p, u_j, k - 1, params);
  const double q = 1 - fail_pow(params, u_j);
  out.diff_extra_RS = appendixD_payoffs(p, q, k, params).ctnK1 - vk;
  out.now_vs_delay_exact = k_experiments_value(p, k, params) >= 0.0;
  return out;
}

double solve_x0(double tol) {
  double lo = 0.5, hi = 1.0;
  auto f = [](double x) { return x + std::exp(-2 * x) - 1; };
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace stratexp
