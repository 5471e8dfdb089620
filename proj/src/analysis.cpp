#include "btpe/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "btpe/math.hpp"

namespace btpe::analysis {

double ln_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n)
    throw std::domain_error("ln_binomial_coefficient: need 0 <= k <= n");
  return detail::ln_choose(n, k);
}

IterationPrediction predict_uniforms(const BinomialParams& params) {
  if (!btpe_applicable(params))
    throw std::invalid_argument("predict_uniforms: BTPE does not apply to this (n, p)");
  const BtpeConstants k = compute_btpe_constants(params);
  const auto m = static_cast<double>(k.m);
  const auto n = static_cast<double>(params.n);
  const double log_ev = std::numbers::ln2 + std::log(k.p4) + ln_binomial_coefficient(params.n, k.m) +
                        m * std::log(k.r) + (n - m) * std::log1p(-k.r);
  IterationPrediction out;
  out.e_uniforms = std::exp(log_ev);
  out.e_iterations = 0.5 * out.e_uniforms;
  return out;
}

StirlingBounds stirling_bounds(std::int64_t n) {
  if (n < 1) throw std::domain_error("stirling_bounds: n must be >= 1");
  const auto x = static_cast<double>(n);
  StirlingBounds b;
  b.n = n;
  b.central = std::sqrt(2.0 * std::numbers::pi * x) * std::pow(x / std::numbers::e, x);
  b.alpha_lower = 1.0 / (12.0 * x + 1.0);
  b.alpha_upper = 1.0 / (12.0 * x);
  b.lower = b.central * std::exp(b.alpha_lower);
  b.upper = b.central * std::exp(b.alpha_upper);
  return b;
}

MinPLimit limit_min_p() {
  // r = 10/n -> 0, q -> 1, f_M -> 10, M = 10, x_M = 10.5.
  MinPLimit out;
  out.p1_limit = std::floor(2.195 * std::sqrt(10.0) - 4.6) + 0.5;
  // x_L -> 8 and x_R -> 13.
  const double a_l = (10.0 - 8.0) / 10.0;
  out.lambda_l_limit = a_l * (1.0 + a_l / 2.0);
  const double a_r = (13.0 - 10.0) / 13.0;
  out.lambda_r_limit = a_r * (1.0 + a_r / 2.0);
  out.c = 0.134 + 20.5 / (15.3 + 10.0);
  const double alpha10 = stirling_bounds(10).alpha_mid();
  out.prefactor = 2.0 / (std::sqrt(20.0 * std::numbers::pi) * std::exp(alpha10));
  const double p4 = out.p1_limit * (1.0 + 2.0 * out.c) + out.c / out.lambda_l_limit +
                    out.c / out.lambda_r_limit;
  out.result = out.prefactor * p4;
  return out;
}

HalfLimit limit_half() {
  HalfLimit out;
  // p1 ~ 2.195 sqrt(n/4), so p1/sqrt(n) -> 2.195/2.
  out.p1_over_sqrt_n = 2.195 / 2.0;
  // M = n/2 grows without bound.
  out.c_limit = 0.134;
  // x_R - f_M = p1, so 2/(sqrt(n) lambda_R) -> sqrt(n)/(2 p1).
  out.two_over_sqrtn_lambda_r = 1.0 / (2.0 * out.p1_over_sqrt_n);
  out.prefactor = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  out.result = out.prefactor * (out.p1_over_sqrt_n * (1.0 + 2.0 * out.c_limit) +
                                out.two_over_sqrtn_lambda_r * out.c_limit);
  return out;
}

}  // namespace btpe::analysis
