#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace btpe::stats {

class TooFewSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SummaryStats {
  std::int64_t count = 0;
  double mean = 0.0;
  double sample_std = 0.0;  // Bessel-corrected
  double ci_half_width = 0.0;
  double confidence = 0.0;
};

/// Mean, sample standard deviation and a Student-t confidence interval
/// half-width. Needs at least two samples and 0 < confidence < 1.
SummaryStats summarize(std::span<const double> samples, double confidence);

/// Two-sided p-value of Student's t with df degrees of freedom, computed as
/// I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_sided_p(double t, std::int64_t df);

/// One-sample two-sided t-test of mean == mu0. A zero-variance sample gives
/// 1 when its mean equals mu0 and 0 otherwise.
double t_test_one_sample(std::span<const double> samples, double mu0);

/// Pearson chi-square goodness of fit. observed[i] counts outcome i,
/// expected_probs[i] is its probability. Adjacent bins are merged left to
/// right until each expected count is at least 5 (a short trailing group
/// joins its neighbour). Returns the upper-tail p-value with bins - 1
/// degrees of freedom, or 1 when fewer than two bins remain.
struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t bins = 0;
  double p_value = 1.0;
};
ChiSquareResult chi_square_test(std::span<const std::int64_t> observed,
                                std::span<const double> expected_probs, std::int64_t trials);

inline double chi_square_gof(std::span<const std::int64_t> observed,
                             std::span<const double> expected_probs, std::int64_t trials) {
  return chi_square_test(observed, expected_probs, trials).p_value;
}

}  // namespace btpe::stats
