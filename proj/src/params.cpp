#include "stratexp/params.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "stratexp/errors.hpp"

namespace stratexp {

namespace {

bool open_unit(double x) { return x > 0.0 && x < 1.0; }

}  // namespace

ModelParams::ModelParams(double lambda, double delta, double c, double m,
                         double p0)
    : lambda_(lambda), delta_(delta), c_(c), m_(m), p0_(p0),
      sqrt_delta_(std::sqrt(delta)) {
  if (!open_unit(lambda)) throw InvalidParams("lambda must lie in (0,1)");
  if (!open_unit(delta)) throw InvalidParams("delta must lie in (0,1)");
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidParams("c must be > 0");
  if (!(m > 0.0) || !std::isfinite(m)) throw InvalidParams("m must be > 0");
  if (!open_unit(p0)) throw InvalidParams("p0 must lie in (0,1)");
  if (!(g() > 0.0)) throw InvalidParams("need g = lambda*m - c > 0");
}

ModelParams ModelParams::parse(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      double x = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      v.push_back(x);
    } catch (const std::exception&) {
      throw InvalidParams("cannot read number '" + item + "' in --params");
    }
  }
  if (v.size() != 5) {
    throw InvalidParams("--params expects lambda,delta,c,m,p0");
  }
  return {v[0], v[1], v[2], v[3], v[4]};
}

std::string ModelParams::to_string() const {
  // shortest form that round-trips
  std::string out;
  for (double x : {lambda_, delta_, c_, m_, p0_}) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    if (!out.empty()) out += ',';
    out.append(buf, r.ptr);
  }
  return out;
}

Belief Belief::from_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("belief outside [0,1]");
  if (p == 1.0) return certain();
  return Belief(p / (1.0 - p), false);
}

Belief phi(Belief p, const ModelParams& params) {
  if (p.is_certain()) return p;
  return Belief::from_lr(p.lr() * (1.0 - params.lambda()));
}

Belief phi_iterate(Belief p, long n, const ModelParams& params) {
  if (p.is_certain() || n == 0) return p;
  return Belief::from_lr(p.lr() *
                         std::pow(1.0 - params.lambda(), static_cast<double>(n)));
}

Belief phi_inverse(Belief p, const ModelParams& params,
                   bool accept_fixed_point) {
  if (p.is_certain()) {
    if (!accept_fixed_point) throw std::domain_error("phi_inverse at p = 1");
    return p;
  }
  return Belief::from_lr(p.lr() / (1.0 - params.lambda()));
}

double phi(double p, const ModelParams& params) {
  return phi(Belief::from_probability(p), params).value();
}

double phi_iterate(double p, long n, const ModelParams& params) {
  return phi_iterate(Belief::from_probability(p), n, params).value();
}

double phi_inverse(double p, const ModelParams& params) {
  return phi_inverse(Belief::from_probability(p), params).value();
}

}  // namespace stratexp
