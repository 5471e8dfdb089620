#include "btpe/binomial.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace btpe {

void validate(const BinomialParams& params) {
  if (params.n < 0) throw std::invalid_argument("binomial: n must be non-negative");
  if (!(params.p >= 0.0 && params.p <= 1.0))
    throw std::invalid_argument("binomial: p must lie in [0, 1], got " + std::to_string(params.p));
}

double smaller_tail(double p) noexcept {
  if (p >= 0.5) return 1.0 - p;
  const double mirrored = 1.0 - (1.0 - p);
  return std::abs(mirrored - p) <= std::ldexp(p, -30) ? mirrored : p;
}

bool btpe_applicable(const BinomialParams& params) noexcept {
  if (params.n < 1 || !(params.p >= 0.0 && params.p <= 1.0)) return false;
  const double r = smaller_tail(params.p);
  return r * static_cast<double>(params.n) >= 10.0;
}

BtpeConstants compute_btpe_constants(const BinomialParams& params) {
  validate(params);
  if (!btpe_applicable(params))
    throw std::invalid_argument("BTPE requires min(p, 1-p) * n >= 10");

  const double n = static_cast<double>(params.n);
  BtpeConstants k;
  k.r = smaller_tail(params.p);
  k.q = 1.0 - k.r;
  k.f_m = n * k.r + k.r;
  k.m = static_cast<std::int64_t>(std::floor(k.f_m));
  k.p1 = std::floor(2.195 * std::sqrt(n * k.r * k.q) - 4.6 * k.q) + 0.5;
  k.x_m = static_cast<double>(k.m) + 0.5;
  k.x_l = k.x_m - k.p1;
  k.x_r = k.x_m + k.p1;
  k.c = 0.134 + 20.5 / (15.3 + static_cast<double>(k.m));
  k.a_l = (k.f_m - k.x_l) / (k.f_m - k.x_l * k.r);
  k.lambda_l = k.a_l * (1.0 + 0.5 * k.a_l);
  k.a_r = (k.x_r - k.f_m) / (k.x_r * k.q);
  k.lambda_r = k.a_r * (1.0 + 0.5 * k.a_r);
  k.p2 = k.p1 * (1.0 + 2.0 * k.c);
  k.p3 = k.p2 + k.c / k.lambda_l;
  k.p4 = k.p3 + k.c / k.lambda_r;
  k.log_pmf_mode = detail::log_pmf_unchecked(params.n, k.r, k.m);
  return k;
}

double log_pmf(std::int64_t n, double p, std::int64_t y) {
  if (n < 0 || y < 0 || y > n) throw std::domain_error("log_pmf: y must lie in [0, n]");
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("log_pmf: p must lie in (0, 1)");
  return detail::log_pmf_unchecked(n, p, y);
}

std::vector<double> pmf_table(const BinomialParams& params) {
  validate(params);
  std::vector<double> probs(static_cast<std::size_t>(params.n) + 1, 0.0);
  if (params.n == 0 || params.p == 0.0) {
    probs.front() = 1.0;
  } else if (params.p == 1.0) {
    probs.back() = 1.0;
  } else {
    for (std::int64_t y = 0; y <= params.n; ++y)
      probs[static_cast<std::size_t>(y)] = std::exp(detail::log_pmf_unchecked(params.n, params.p, y));
  }
  return probs;
}

BinomialDistribution::BinomialDistribution(BinomialParams params) : params_(params) {
  validate(params_);
  uses_btpe_ = btpe_applicable(params_);
  if (uses_btpe_) constants_ = compute_btpe_constants(params_);
}

}  // namespace btpe
