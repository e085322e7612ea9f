#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "stratexp/params.hpp"

namespace stratexp {

// Closed forms shared by the double and exact-rational paths. `dp` is the
// effective discount, `pow_n` stands for (1 - lambda)^n.
namespace formulas {

template <class T>
T p_star(const T& lambda, const T& dp, const T& c, const T& g) {
  T one(1);
  return c * (one - dp) / (c * (one - dp) + g * (one - dp * (one - lambda)));
}

template <class T>
T p_tilde(const T& lambda, const T& delta, const T& c, const T& m, const T& g) {
  T one(1);
  return c * (one - delta) / ((one - delta) * lambda * m + delta * g);
}

template <class T>
T p_hat(const T& lambda, const T& delta, const T& c, const T& g) {
  T one(1);
  T k = one - delta + lambda * delta * (one + delta - lambda * delta);
  return c * (one - delta) / (c * (one - delta) + g * k);
}

template <class T>
T p_hat_n(const T& lambda, const T& delta, const T& c, const T& g,
          const T& pow_n) {
  T one(1);
  T fail2 = (one - lambda) * (one - lambda);
  T k = (one - delta) * (one - delta + lambda * delta) +
        delta * (one - delta * fail2) * pow_n;
  return c * (one - delta) / (c * (one - delta) + g * k);
}

template <class T>
T p_star_n(const T& lambda, const T& delta, const T& c, const T& g,
           const T& pow_n) {
  T one(1);
  return c * (one - delta) /
         (c * (one - delta) + g * (one - delta + delta * lambda * pow_n));
}

template <class T>
T p_bar(const T& lambda, const T& delta, const T& c, const T& g) {
  T one(1);
  T fail2 = (one - lambda) * (one - lambda);
  return c * (one - delta) / (c * (one - delta) + g * (one - delta * fail2));
}

}  // namespace formulas

constexpr double kGenericityBand = 1e-9;

double cutoff_p_star(const ModelParams& params, double effective_delta);
double cutoff_p_star(const ModelParams& params);
double cutoff_p_star_social(const ModelParams& params);
double cutoff_p_tilde(const ModelParams& params);
double cutoff_p_hat(const ModelParams& params);
double cutoff_p_hat_n(const ModelParams& params, long n);
double cutoff_p_star_n(const ModelParams& params, long n);
double cutoff_p_bar(const ModelParams& params);
double cutoff_p_myop(const ModelParams& params);

// p >= cut, with a flag when p sits inside the genericity band.
struct CutoffTest {
  bool at_or_above;
  bool near_tie;
};
CutoffTest compare_to_cutoff(double p, double cut);

// inf{n >= min_index : phi^n(p) < cut}.
struct IndexResult {
  int n = 0;
  bool near_tie = false;
};
IndexResult first_index_below(double p, double cut, const ModelParams& params,
                              int min_index = 0);

struct CutoffSet {
  double p_star = 0, p_star_social = 0, p_tilde = 0, p_hat = 0, p_myop = 0,
         p_bar = 0;
  std::vector<double> p_hat_n, p_star_n;
  int N_star = 0, N_star_social = 0, N_tilde = 0, N_hat = 0;
  bool genericity_flag = false;
  std::vector<std::string> genericity_notes;
};

CutoffSet compute_cutoffs(const ModelParams& params, int n_max = 50);

// Exact-rational mode for oracle tests. No square roots, so p** is absent.
namespace exact {

using Rational = boost::multiprecision::cpp_rational;

struct Params {
  Rational lambda, delta, c, m, p0;
  Rational g() const { return lambda * m - c; }
};

Rational pow_fail(const Params& params, long n);
Rational phi_iterate(const Params& params, const Rational& p, long n);
Rational p_star(const Params& params);
Rational p_tilde(const Params& params);
Rational p_hat(const Params& params);
Rational p_hat_n(const Params& params, long n);
Rational p_star_n(const Params& params, long n);
Rational p_bar(const Params& params);
// inf{n >= 0 : phi^n(p0) < cut}, decided exactly.
int first_index_below(const Params& params, const Rational& cut);

}  // namespace exact

}  // namespace stratexp
