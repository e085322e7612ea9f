#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace stratexp {

// Primitive model tuple. Validated on construction, immutable afterwards.
class ModelParams {
 public:
  ModelParams(double lambda, double delta, double c, double m, double p0);

  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  double c() const { return c_; }
  double m() const { return m_; }
  double p0() const { return p0_; }
  double g() const { return lambda_ * m_ - c_; }
  double sqrt_delta() const { return sqrt_delta_; }

  ModelParams with_p0(double p0) const { return {lambda_, delta_, c_, m_, p0}; }
  ModelParams with_delta(double delta) const { return {lambda_, delta, c_, m_, p0_}; }

  // "lambda,delta,c,m,p0"
  static ModelParams parse(const std::string& text);
  std::string to_string() const;

 private:
  double lambda_, delta_, c_, m_, p0_;
  double sqrt_delta_;
};

// Probability of the good state, stored as a likelihood ratio p/(1-p).
// Certainty (p = 1) is a separate state rather than an infinite ratio.
class Belief {
 public:
  Belief() = default;
  static Belief from_probability(double p);
  static Belief from_lr(double lr) { return Belief(lr, false); }
  static Belief certain() { return Belief(0.0, true); }

  bool is_certain() const { return certain_; }
  double lr() const {
    return certain_ ? std::numeric_limits<double>::infinity() : lr_;
  }
  double value() const { return certain_ ? 1.0 : lr_ / (1.0 + lr_); }

 private:
  Belief(double lr, bool certain) : lr_(lr), certain_(certain) {}
  double lr_ = 0.0;
  bool certain_ = false;
};

inline double likelihood_ratio(double p) { return p / (1.0 - p); }
inline double probability_from_lr(double lr) { return lr / (1.0 + lr); }

Belief phi(Belief p, const ModelParams& params);
Belief phi_iterate(Belief p, long n, const ModelParams& params);
// Throws std::domain_error at p = 1 unless the fixed point is accepted.
Belief phi_inverse(Belief p, const ModelParams& params,
                   bool accept_fixed_point = false);

double phi(double p, const ModelParams& params);
double phi_iterate(double p, long n, const ModelParams& params);
double phi_inverse(double p, const ModelParams& params);

}  // namespace stratexp
