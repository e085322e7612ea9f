#include "stratexp/cutoffs.hpp"

#include <cmath>
#include <cstdio>

namespace stratexp {

namespace {

constexpr long kLimitIndex = 1000000;

double pow_fail(const ModelParams& params, long n) {
  if (n > kLimitIndex) return 0.0;
  return std::pow(1.0 - params.lambda(), static_cast<double>(n));
}

}  // namespace

double cutoff_p_star(const ModelParams& params, double effective_delta) {
  return formulas::p_star(params.lambda(), effective_delta, params.c(),
                          params.g());
}

double cutoff_p_star(const ModelParams& params) {
  return cutoff_p_star(params, params.delta());
}

double cutoff_p_star_social(const ModelParams& params) {
  return cutoff_p_star(params, params.sqrt_delta());
}

double cutoff_p_tilde(const ModelParams& params) {
  return formulas::p_tilde(params.lambda(), params.delta(), params.c(),
                           params.m(), params.g());
}

double cutoff_p_hat(const ModelParams& params) {
  return formulas::p_hat(params.lambda(), params.delta(), params.c(),
                         params.g());
}

double cutoff_p_hat_n(const ModelParams& params, long n) {
  return formulas::p_hat_n(params.lambda(), params.delta(), params.c(),
                           params.g(), pow_fail(params, n));
}

double cutoff_p_star_n(const ModelParams& params, long n) {
  if (n > kLimitIndex) return cutoff_p_myop(params);
  return formulas::p_star_n(params.lambda(), params.delta(), params.c(),
                            params.g(), pow_fail(params, n));
}

double cutoff_p_bar(const ModelParams& params) {
  return formulas::p_bar(params.lambda(), params.delta(), params.c(),
                         params.g());
}

double cutoff_p_myop(const ModelParams& params) {
  return params.c() / (params.lambda() * params.m());
}

CutoffTest compare_to_cutoff(double p, double cut) {
  return {p >= cut, std::abs(p - cut) < kGenericityBand};
}

IndexResult first_index_below(double p, double cut, const ModelParams& params,
                              int min_index) {
  IndexResult out;
  if (cut <= 0.0) {
    out.n = -1;  // never below
    return out;
  }
  const double lr0 = likelihood_ratio(p);
  const double lr_cut = likelihood_ratio(cut);
  const double step = std::log(1.0 - params.lambda());
  long n = 0;
  if (lr0 >= lr_cut) {
    n = static_cast<long>(std::floor(std::log(lr_cut / lr0) / step));
    if (n < 0) n = 0;
  }
  // The logarithm is only a starting guess; settle with direct checks.
  while (n > 0 && phi_iterate(p, n - 1, params) < cut) --n;
  while (!(phi_iterate(p, n, params) < cut)) ++n;
  if (n < min_index) n = min_index;
  out.n = static_cast<int>(n);
  for (long k = std::max(0L, n - 1); k <= n + 1; ++k) {
    if (std::abs(phi_iterate(p, k, params) - cut) < kGenericityBand) {
      out.near_tie = true;
    }
  }
  return out;
}

CutoffSet compute_cutoffs(const ModelParams& params, int n_max) {
  CutoffSet s;
  s.p_star = cutoff_p_star(params);
  s.p_star_social = cutoff_p_star_social(params);
  s.p_tilde = cutoff_p_tilde(params);
  s.p_hat = cutoff_p_hat(params);
  s.p_myop = cutoff_p_myop(params);
  s.p_bar = cutoff_p_bar(params);
  for (int n = 0; n <= n_max; ++n) {
    s.p_hat_n.push_back(cutoff_p_hat_n(params, n));
    s.p_star_n.push_back(cutoff_p_star_n(params, n));
  }
  auto count = [&](const char* name, double cut, int min_index, int& slot) {
    IndexResult r = first_index_below(params.p0(), cut, params, min_index);
    slot = r.n;
    if (r.near_tie) {
      s.genericity_flag = true;
      s.genericity_notes.push_back(std::string(name) +
                                   ": phi^n(p0) within 1e-9 of its cutoff");
    }
  };
  count("N_star", s.p_star, 0, s.N_star);
  count("N_star_social", s.p_star_social, 0, s.N_star_social);
  count("N_tilde", s.p_tilde, 0, s.N_tilde);
  count("N_hat", s.p_hat, 1, s.N_hat);
  return s;
}

namespace exact {

Rational pow_fail(const Params& params, long n) {
  Rational out(1);
  Rational f = Rational(1) - params.lambda;
  for (long i = 0; i < n; ++i) out *= f;
  return out;
}

Rational phi_iterate(const Params& params, const Rational& p, long n) {
  Rational lr = p / (Rational(1) - p) * pow_fail(params, n);
  return lr / (Rational(1) + lr);
}

Rational p_star(const Params& params) {
  return formulas::p_star(params.lambda, params.delta, params.c, params.g());
}

Rational p_tilde(const Params& params) {
  return formulas::p_tilde(params.lambda, params.delta, params.c, params.m,
                           params.g());
}

Rational p_hat(const Params& params) {
  return formulas::p_hat(params.lambda, params.delta, params.c, params.g());
}

Rational p_hat_n(const Params& params, long n) {
  return formulas::p_hat_n(params.lambda, params.delta, params.c, params.g(),
                           pow_fail(params, n));
}

Rational p_star_n(const Params& params, long n) {
  return formulas::p_star_n(params.lambda, params.delta, params.c, params.g(),
                            pow_fail(params, n));
}

Rational p_bar(const Params& params) {
  return formulas::p_bar(params.lambda, params.delta, params.c, params.g());
}

int first_index_below(const Params& params, const Rational& cut) {
  Rational lr = params.p0 / (Rational(1) - params.p0);
  const Rational lr_cut = cut / (Rational(1) - cut);
  const Rational f = Rational(1) - params.lambda;
  int n = 0;
  while (!(lr < lr_cut)) {
    lr *= f;
    ++n;
  }
  return n;
}

}  // namespace exact

}  // namespace stratexp
