#pragma once

// Binomial variates: BTPE (triangle, parallelogram and two exponential
// tails under a dominating hat) when min(p, 1-p) * n >= 10, and a CDF walk
// otherwise. Both consume uniforms from a caller-supplied source.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "btpe/math.hpp"
#include "btpe/uniform_source.hpp"

namespace btpe {

struct BinomialParams {
  std::int64_t n = 0;
  double p = 0.0;
};

/// Throws std::invalid_argument for n < 0 or p outside [0, 1] (NaN included).
void validate(const BinomialParams& params);

/// min(p, 1-p), rounded so that p and its computed complement 1 - p reduce
/// to the same double. For p >= 1/2 this is 1 - p (exact). For p < 1/2 it
/// is 1 - fl(1 - p), the value the mirrored input produces, unless that
/// moves p by more than 2^-30 relative (only for p below ~1e-7), in which
/// case p itself is kept.
double smaller_tail(double p) noexcept;

/// True iff n >= 1 and min(p, 1-p) * n >= 10.
bool btpe_applicable(const BinomialParams& params) noexcept;

/// Region constants of the BTPE hat for one (n, p). Everything is expressed
/// for r = min(p, 1-p); the sampler reflects at the end when p > 0.5.
struct BtpeConstants {
  double r = 0.0;
  double q = 0.0;
  double f_m = 0.0;    // n r + r
  std::int64_t m = 0;  // mode, floor(f_m)
  double p1 = 0.0;     // half-width of the triangle
  double x_m = 0.0;
  double x_l = 0.0;
  double x_r = 0.0;
  double c = 0.0;      // parallelogram height
  double a_l = 0.0;
  double lambda_l = 0.0;
  double a_r = 0.0;
  double lambda_r = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
  double p4 = 0.0;     // total hat area
  double log_pmf_mode = 0.0;  // log_pmf(n, r, m), reused by every acceptance test
};

/// Throws std::invalid_argument unless btpe_applicable(params).
BtpeConstants compute_btpe_constants(const BinomialParams& params);

/// ln( C(n,y) p^y (1-p)^(n-y) ). Requires 0 <= y <= n and 0 < p < 1; throws
/// std::domain_error otherwise.
double log_pmf(std::int64_t n, double p, std::int64_t y);

/// P(X = k) for k = 0..n, including the degenerate cases.
std::vector<double> pmf_table(const BinomialParams& params);

namespace detail {
// Acceptance-test kernel; the caller guarantees 0 <= y <= n and 0 < p < 1.
inline double log_pmf_unchecked(std::int64_t n, double p, std::int64_t y) noexcept {
  return ln_choose(n, y) + static_cast<double>(y) * std::log(p) +
         static_cast<double>(n - y) * std::log1p(-p);
}
}  // namespace detail

/// CDF walk over B(n, r). One uniform per variate, none for the degenerate
/// cases n = 0 and p in {0, 1}.
template <UniformSource S>
std::int64_t sample_inverse_transform(const BinomialParams& params, S& source) {
  validate(params);
  const std::int64_t n = params.n;
  if (n == 0 || params.p == 0.0) return 0;
  if (params.p == 1.0) return n;

  const double r = smaller_tail(params.p);
  const double s = r / (1.0 - r);
  const double a = static_cast<double>(n + 1) * s;
  double f = std::pow(1.0 - r, static_cast<double>(n));
  double u = source.next_uniform();
  std::int64_t k = 0;
  // Rounding can leave a sliver of mass past k = n; stop there.
  while (u > f && k < n) {
    u -= f;
    ++k;
    f *= a / static_cast<double>(k) - s;
  }
  return params.p <= 0.5 ? k : n - k;
}

/// One BTPE variate. Each acceptance-rejection iteration draws exactly two
/// uniforms up front, so the number consumed is always even.
template <UniformSource S>
std::int64_t sample_btpe(const BinomialParams& params, const BtpeConstants& k, S& source) {
  const std::int64_t n = params.n;
  const double dn = static_cast<double>(n);
  std::int64_t y = 0;
  for (;;) {
    const double u = source.next_uniform() * k.p4;
    double v = source.next_uniform();

    if (u <= k.p1) {
      y = static_cast<std::int64_t>(std::floor(k.x_m - k.p1 * v + u));
      break;
    }
    if (u <= k.p2) {
      const double x = k.x_l + (u - k.p1) / k.c;
      v = v * k.c + 1.0 - std::abs(k.x_m - x) / k.p1;
      if (v > 1.0) continue;
      const double yd = std::floor(x);
      if (yd < 0.0 || yd > dn) continue;
      y = static_cast<std::int64_t>(yd);
    } else if (u <= k.p3) {
      const double yd = std::floor(k.x_l + std::log(v) / k.lambda_l);
      if (!(yd >= 0.0)) continue;
      y = static_cast<std::int64_t>(yd);
      v = v * (u - k.p2) * k.lambda_l;
    } else {
      const double yd = std::floor(k.x_r - std::log(v) / k.lambda_r);
      if (!(yd <= dn)) continue;
      y = static_cast<std::int64_t>(yd);
      v = v * (u - k.p3) * k.lambda_r;
    }
    if (std::log(v) <= detail::log_pmf_unchecked(n, k.r, y) - k.log_pmf_mode) break;
  }
  return params.p > 0.5 ? n - y : y;
}

/// Dispatch: BTPE when applicable, inverse transform otherwise.
template <UniformSource S>
std::int64_t sample(const BinomialParams& params, S& source) {
  validate(params);
  if (btpe_applicable(params)) return sample_btpe(params, compute_btpe_constants(params), source);
  return sample_inverse_transform(params, source);
}

/// B(n, p) with the BTPE constants computed once.
class BinomialDistribution {
 public:
  explicit BinomialDistribution(BinomialParams params);

  const BinomialParams& params() const noexcept { return params_; }
  bool uses_btpe() const noexcept { return uses_btpe_; }
  const BtpeConstants& constants() const noexcept { return constants_; }

  template <UniformSource S>
  std::int64_t operator()(S& source) const {
    return uses_btpe_ ? sample_btpe(params_, constants_, source)
                      : sample_inverse_transform(params_, source);
  }

 private:
  BinomialParams params_;
  bool uses_btpe_ = false;
  BtpeConstants constants_{};
};

}  // namespace btpe
