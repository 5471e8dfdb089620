#pragma once

#include <cstdint>

#include "btpe/binomial.hpp"

namespace btpe::analysis {

/// Expected acceptance-rejection iterations and uniforms per BTPE variate.
struct IterationPrediction {
  double e_iterations = 0.0;
  double e_uniforms = 0.0;  // always 2 * e_iterations
};

/// ln C(n, k) through log-gamma. Throws std::domain_error unless 0 <= k <= n.
double ln_binomial_coefficient(std::int64_t n, std::int64_t k);

/// E[V] = 2 p4 C(n, M) r^M (1 - r)^(n - M), evaluated in log space.
/// Throws std::invalid_argument when BTPE does not apply to params.
IterationPrediction predict_uniforms(const BinomialParams& params);

/// Stirling's n! ~ sqrt(2 pi n) (n/e)^n e^alpha with
/// 1/(12n+1) < alpha < 1/(12n).
struct StirlingBounds {
  std::int64_t n = 0;
  double central = 0.0;  // sqrt(2 pi n) (n/e)^n
  double lower = 0.0;
  double upper = 0.0;
  double alpha_lower = 0.0;
  double alpha_upper = 0.0;

  double alpha_mid() const noexcept { return 0.5 * (alpha_lower + alpha_upper); }
};

/// Throws std::domain_error for n < 1.
StirlingBounds stirling_bounds(std::int64_t n);

/// Large-n limit of E[V] at p = 10/n, with the intermediate limits.
struct MinPLimit {
  double p1_limit = 0.0;
  double lambda_l_limit = 0.0;
  double lambda_r_limit = 0.0;
  double c = 0.0;          // 0.134 + 20.5 / 25.3, since M = 10
  double prefactor = 0.0;  // 2 / (sqrt(20 pi) e^alpha_10)
  double result = 0.0;
};
MinPLimit limit_min_p();

/// Large-n limit of E[V] at p = 1/2.
struct HalfLimit {
  double p1_over_sqrt_n = 0.0;
  double c_limit = 0.0;
  double two_over_sqrtn_lambda_r = 0.0;
  double prefactor = 0.0;  // 2 sqrt(2/pi)
  double result = 0.0;
};
HalfLimit limit_half();

}  // namespace btpe::analysis
