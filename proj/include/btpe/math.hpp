#pragma once

#include <cmath>
#include <cstdint>

namespace btpe::detail {

// std::lgamma writes the global signgam on glibc; lgamma_r does not.
inline double log_gamma(double x) noexcept {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

/// ln C(n, k) without range checks.
inline double ln_choose(std::int64_t n, std::int64_t k) noexcept {
  return log_gamma(static_cast<double>(n) + 1.0) - log_gamma(static_cast<double>(k) + 1.0) -
         log_gamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace btpe::detail
