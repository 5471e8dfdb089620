#include "btpe/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "btpe/kernels.hpp"

namespace btpe::stats {

SummaryStats summarize(std::span<const double> samples, double confidence) {
  if (samples.size() < 2) throw TooFewSamples("summarize: need at least two samples");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("summarize: confidence must lie in (0, 1)");

  const auto m = kernels::active().moments(samples);
  const auto count = static_cast<std::int64_t>(samples.size());
  SummaryStats s;
  s.count = count;
  s.mean = m.mean;
  s.sample_std = std::sqrt(m.sum_sq_dev / static_cast<double>(count - 1));
  s.confidence = confidence;
  const boost::math::students_t dist(static_cast<double>(count - 1));
  const double t = boost::math::quantile(dist, 0.5 * (1.0 + confidence));
  s.ci_half_width = t * s.sample_std / std::sqrt(static_cast<double>(count));
  return s;
}

double student_t_two_sided_p(double t, std::int64_t df) {
  if (df < 1) throw std::domain_error("student_t_two_sided_p: df must be >= 1");
  if (std::isnan(t)) throw std::domain_error("student_t_two_sided_p: t is NaN");
  if (std::isinf(t)) return 0.0;
  const auto v = static_cast<double>(df);
  const double x = v / (v + t * t);
  if (x >= 1.0) return 1.0;
  return boost::math::ibeta(0.5 * v, 0.5, x);
}

double t_test_one_sample(std::span<const double> samples, double mu0) {
  if (samples.size() < 2) throw TooFewSamples("t_test_one_sample: need at least two samples");
  const auto m = kernels::active().moments(samples);
  const auto count = static_cast<double>(samples.size());
  const double sd = std::sqrt(m.sum_sq_dev / (count - 1.0));
  if (sd == 0.0) return m.mean == mu0 ? 1.0 : 0.0;
  const double t = (m.mean - mu0) / (sd / std::sqrt(count));
  return student_t_two_sided_p(t, static_cast<std::int64_t>(samples.size()) - 1);
}

ChiSquareResult chi_square_test(std::span<const std::int64_t> observed,
                                std::span<const double> expected_probs, std::int64_t trials) {
  if (observed.size() != expected_probs.size())
    throw std::invalid_argument("chi_square_gof: observed and expected sizes differ");
  if (observed.empty()) throw std::invalid_argument("chi_square_gof: no bins");
  const double total_prob = std::accumulate(expected_probs.begin(), expected_probs.end(), 0.0);
  if (std::abs(total_prob - 1.0) > 1e-9)
    throw std::invalid_argument("chi_square_gof: expected probabilities must sum to 1");
  if (std::accumulate(observed.begin(), observed.end(), std::int64_t{0}) != trials)
    throw std::invalid_argument("chi_square_gof: observed counts must sum to trials");

  ChiSquareResult out;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected_probs[i] == 0.0 && observed[i] != 0) {
      // An impossible outcome was observed.
      out.statistic = std::numeric_limits<double>::infinity();
      out.bins = static_cast<std::int64_t>(observed.size());
      out.p_value = 0.0;
      return out;
    }
  }

  constexpr double kMinExpected = 5.0;
  const auto n_trials = static_cast<double>(trials);
  std::vector<double> obs;
  std::vector<double> exp;
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += static_cast<double>(observed[i]);
    e_acc += expected_probs[i] * n_trials;
    if (e_acc >= kMinExpected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (exp.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }

  out.bins = static_cast<std::int64_t>(obs.size());
  if (out.bins < 2) return out;
  out.statistic = kernels::active().chi_square(obs, exp);
  const double df = static_cast<double>(out.bins - 1);
  out.p_value = boost::math::gamma_q(0.5 * df, 0.5 * out.statistic);
  return out;
}

}  // namespace btpe::stats
