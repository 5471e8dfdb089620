#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "btpe/binomial.hpp"
#include "btpe/stats.hpp"
#include "btpe/uniform_source.hpp"

using namespace btpe;

namespace {

// Replays a fixed list of uniforms; running past the end is a test failure.
class ScriptedSource {
 public:
  explicit ScriptedSource(std::vector<double> values) : values_(std::move(values)) {}
  double next_uniform() {
    if (pos_ >= values_.size()) throw std::logic_error("scripted source exhausted");
    return values_[pos_++];
  }
  std::size_t used() const { return pos_; }

 private:
  std::vector<double> values_;
  std::size_t pos_ = 0;
};

// Exact binomial CDF by direct summation of C(n,k) p^k q^(n-k) with integer
// coefficients, for small n only.
std::vector<double> exact_cdf(int n, double p) {
  std::vector<double> cdf(n + 1);
  double coeff = 1.0;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    acc += coeff * std::pow(p, k) * std::pow(1.0 - p, n - k);
    cdf[k] = acc;
    coeff = coeff * (n - k) / (k + 1);
  }
  return cdf;
}

}  // namespace

// ---- parameters and applicability --------------------------------------------

TEST(Params, RejectsInvalidInput) {
  EXPECT_THROW(validate({-1, 0.5}), std::invalid_argument);
  EXPECT_THROW(validate({10, -0.1}), std::invalid_argument);
  EXPECT_THROW(validate({10, 1.5}), std::invalid_argument);
  EXPECT_THROW(validate({10, std::numeric_limits<double>::quiet_NaN()}), std::invalid_argument);
  EXPECT_NO_THROW(validate({0, 0.0}));
  EXPECT_NO_THROW(validate({5, 1.0}));
}

TEST(SmallerTail, MirrorsExactly) {
  EXPECT_EQ(smaller_tail(0.5), 0.5);
  EXPECT_EQ(smaller_tail(0.25), 0.25);
  EXPECT_EQ(smaller_tail(0.75), 0.25);
  EXPECT_EQ(smaller_tail(0.0), 0.0);
  EXPECT_EQ(smaller_tail(1.0), 0.0);
  SplitMix64 gen(11);
  for (int i = 0; i < 100000; ++i) {
    const double p = gen.next_uniform();
    const double r = smaller_tail(p);
    ASSERT_EQ(r, smaller_tail(1.0 - p)) << p;
    ASSERT_LE(r, 0.5);
    ASSERT_LE(std::abs(r - std::min(p, 1.0 - p)), 0x1.0p-53) << p;
    ASSERT_EQ(1.0 - (1.0 - r), r) << p;  // r and q = 1 - r are exact complements
  }
}

TEST(SmallerTail, KeepsTinyProbabilities) {
  // 1 - (1 - 1e-12) is off by ~1e-4 relative; p is kept as is.
  EXPECT_EQ(smaller_tail(1e-12), 1e-12);
  EXPECT_EQ(smaller_tail(1e-300), 1e-300);
  EXPECT_NE(smaller_tail(0.1), 0.0);
  EXPECT_LE(std::abs(smaller_tail(0.1) - 0.1), 0x1.0p-54);
}

TEST(Applicability, Threshold) {
  EXPECT_TRUE(btpe_applicable({20, 0.5}));
  EXPECT_FALSE(btpe_applicable({19, 0.5}));
  EXPECT_FALSE(btpe_applicable({1000, 0.001}));
  EXPECT_TRUE(btpe_applicable({1000, 0.01}));
  EXPECT_TRUE(btpe_applicable({1000, 0.99}));
  EXPECT_FALSE(btpe_applicable({0, 0.5}));
  EXPECT_FALSE(btpe_applicable({100, 0.0}));
  EXPECT_FALSE(btpe_applicable({100, 1.0}));
}

// ---- constants -------------------------------------------------------------------

TEST(Constants, MinimumPAtN2048) {
  const auto k = compute_btpe_constants({2048, 10.0 / 2048.0});
  EXPECT_EQ(k.m, 10);
  EXPECT_NEAR(k.c, 0.944, 5e-4);
  EXPECT_DOUBLE_EQ(k.x_m, 10.5);
}

TEST(Constants, HandEvaluatedN20Half) {
  const auto k = compute_btpe_constants({20, 0.5});
  EXPECT_EQ(k.r, 0.5);
  EXPECT_EQ(k.q, 0.5);
  EXPECT_EQ(k.f_m, 10.5);
  EXPECT_EQ(k.m, 10);
  EXPECT_EQ(k.x_m, 10.5);
  EXPECT_DOUBLE_EQ(k.c, 0.134 + 20.5 / 25.3);
  // floor(2.195 sqrt(5) - 2.3) + 0.5 = floor(2.608...) + 0.5
  EXPECT_EQ(k.p1, 2.5);
  EXPECT_EQ(k.x_l, 8.0);
  EXPECT_EQ(k.x_r, 13.0);
  // a_L = (10.5 - 8) / (10.5 - 4) and a_R = (13 - 10.5) / 6.5 coincide at p = 1/2.
  EXPECT_DOUBLE_EQ(k.a_l, 2.5 / 6.5);
  EXPECT_DOUBLE_EQ(k.a_r, 2.5 / 6.5);
  EXPECT_DOUBLE_EQ(k.lambda_l, k.lambda_r);
  EXPECT_DOUBLE_EQ(k.p2, 2.5 * (1.0 + 2.0 * k.c));
  EXPECT_DOUBLE_EQ(k.p4, k.p3 + k.c / k.lambda_r);
}

TEST(Constants, ReducesThroughSmallerTail) {
  EXPECT_DOUBLE_EQ(compute_btpe_constants({100, 0.7}).r, 1.0 - 0.7);
  EXPECT_LE(compute_btpe_constants({100, 0.7}).r, 0.5);
}

TEST(Constants, RejectsInapplicable) {
  EXPECT_THROW(compute_btpe_constants({19, 0.5}), std::invalid_argument);
  EXPECT_THROW(compute_btpe_constants({1000, 0.001}), std::invalid_argument);
}

TEST(Constants, RegionOrderingAcrossGrid) {
  for (std::int64_t n = 20; n <= (std::int64_t{1} << 24); n = n * 3 / 2 + 1) {
    for (double p : {10.0 / static_cast<double>(n), 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.45, 0.5, 0.6, 0.9,
                     1.0 - 10.0 / static_cast<double>(n)}) {
      const BinomialParams params{n, p};
      if (!btpe_applicable(params)) continue;
      const auto k = compute_btpe_constants(params);
      ASSERT_GT(k.p1, 0.0) << n << ' ' << p;
      ASSERT_LT(k.p1, k.p2) << n << ' ' << p;
      ASSERT_LT(k.p2, k.p3) << n << ' ' << p;
      ASSERT_LT(k.p3, k.p4) << n << ' ' << p;
      ASSERT_GT(k.lambda_l, 0.0);
      ASSERT_GT(k.lambda_r, 0.0);
      ASSERT_EQ(k.m, static_cast<std::int64_t>(std::floor(k.f_m)));
      ASSERT_EQ(k.x_l, k.x_m - k.p1);
      ASSERT_EQ(k.x_r, k.x_m + k.p1);
      ASSERT_GE(k.x_l, 0.0);
    }
  }
}

// ---- log_pmf ----------------------------------------------------------------------

TEST(LogPmf, ExactValues) {
  EXPECT_NEAR(log_pmf(1, 0.5, 0), std::log(0.5), 1e-15);
  EXPECT_NEAR(log_pmf(20, 0.5, 10), std::log(184756.0 / 1048576.0), 1e-12);
  EXPECT_NEAR(log_pmf(5, 0.1, 0), std::log(0.59049), 1e-14);
}

TEST(LogPmf, SumsToOne) {
  for (int n : {1, 2, 7, 20, 50, 100}) {
    for (double p : {0.01, 0.3, 0.5, 0.77}) {
      double total = 0.0;
      for (int y = 0; y <= n; ++y) total += std::exp(log_pmf(n, p, y));
      EXPECT_NEAR(total, 1.0, 1e-10) << n << ' ' << p;
    }
  }
}

TEST(LogPmf, DomainErrors) {
  EXPECT_THROW(log_pmf(10, 0.5, -1), std::domain_error);
  EXPECT_THROW(log_pmf(10, 0.5, 11), std::domain_error);
  EXPECT_THROW(log_pmf(10, 0.0, 3), std::domain_error);
  EXPECT_THROW(log_pmf(10, 1.0, 3), std::domain_error);
}

TEST(PmfTable, DegenerateAndRegular) {
  EXPECT_EQ(pmf_table({3, 0.0}), (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(pmf_table({3, 1.0}), (std::vector<double>{0.0, 0.0, 0.0, 1.0}));
  EXPECT_EQ(pmf_table({0, 0.4}), (std::vector<double>{1.0}));
  const auto probs = pmf_table({4, 0.5});
  EXPECT_NEAR(probs[2], 6.0 / 16.0, 1e-15);
}

// ---- inverse transform ------------------------------------------------------------

TEST(InverseTransform, DegenerateCasesConsumeNothing) {
  CountingSource src{SplitMix64{1}};
  EXPECT_EQ(sample_inverse_transform({12, 0.0}, src), 0);
  EXPECT_EQ(sample_inverse_transform({12, 1.0}, src), 12);
  EXPECT_EQ(sample_inverse_transform({0, 0.3}, src), 0);
  EXPECT_EQ(src.draws(), 0u);
}

TEST(InverseTransform, ForcedUniform) {
  // P(X = 0) = 0.9^5 = 0.59049 >= 0.5.
  ScriptedSource src({0.5});
  EXPECT_EQ(sample_inverse_transform({5, 0.1}, src), 0);
  EXPECT_EQ(src.used(), 1u);

  ScriptedSource above({0.6});
  EXPECT_EQ(sample_inverse_transform({5, 0.1}, above), 1);  // 0.59049 < 0.6 <= 0.91854
}

TEST(InverseTransform, ReflectsForLargeP) {
  ScriptedSource src({0.5});
  EXPECT_EQ(sample_inverse_transform({5, 0.9}, src), 5);
}

TEST(InverseTransform, MatchesExactQuantileFunction) {
  // The walk returns the smallest k with CDF(k) >= u; compare with an
  // exactly summed CDF away from its jump points.
  for (auto [n, p] : std::vector<std::pair<int, double>>{{5, 0.1}, {12, 0.3}, {19, 0.5}, {40, 0.2}}) {
    const auto cdf = exact_cdf(n, p);
    for (int i = 1; i < 2000; ++i) {
      const double u = i / 2000.0;
      int expected = 0;
      while (expected < n && cdf[expected] < u) ++expected;
      if (std::abs(cdf[expected] - u) < 1e-12 || (expected > 0 && std::abs(cdf[expected - 1] - u) < 1e-12))
        continue;
      ScriptedSource src({u});
      ASSERT_EQ(sample_inverse_transform({n, p}, src), expected) << n << ' ' << p << ' ' << u;
    }
  }
}

TEST(InverseTransform, UniformJustBelowOneStaysInRange) {
  ScriptedSource src({std::nextafter(1.0, 0.0)});
  const auto k = sample_inverse_transform({19, 0.5}, src);
  EXPECT_GE(k, 0);
  EXPECT_LE(k, 19);
}

TEST(InverseTransform, RejectsBadP) {
  SplitMix64 src(1);
  EXPECT_THROW(sample_inverse_transform({5, 1.1}, src), std::invalid_argument);
}

// ---- BTPE --------------------------------------------------------------------------

TEST(Btpe, TriangleRegionAcceptsImmediately) {
  const BinomialParams params{20, 0.5};
  const auto k = compute_btpe_constants(params);
  // u * p4 = 1.0 <= p1 = 2.5: floor(10.5 - 2.5 * 0.5 + 1.0) = 10.
  ScriptedSource src({1.0 / k.p4, 0.5});
  EXPECT_EQ(sample_btpe(params, k, src), 10);
  EXPECT_EQ(src.used(), 2u);
}

TEST(Btpe, ConsumptionIsEvenAndAtLeastTwo) {
  for (auto params : std::vector<BinomialParams>{{20, 0.5}, {32, 10.0 / 32}, {1000, 0.3}, {1 << 20, 0.5}}) {
    const auto k = compute_btpe_constants(params);
    CountingSource src{SplitMix64{2024}};
    for (int i = 0; i < 5000; ++i) {
      src.reset();
      sample_btpe(params, k, src);
      ASSERT_GE(src.draws(), 2u);
      ASSERT_EQ(src.draws() % 2, 0u);
    }
  }
}

TEST(Btpe, MeanUniformsPerVariateNearPrediction) {
  const BinomialParams params{32, 10.0 / 32};
  const auto k = compute_btpe_constants(params);
  CountingSource src{SplitMix64{0x5EED}};
  constexpr int kTrials = 10000;
  for (int i = 0; i < kTrials; ++i) sample_btpe(params, k, src);
  EXPECT_NEAR(static_cast<double>(src.draws()) / kTrials, 3.837, 0.15);
}

TEST(Btpe, SampleMeanOfCentralCase) {
  // B(100, 1/2): sigma = 5, standard error over 10^4 draws 0.05.
  const BinomialParams params{100, 0.5};
  SplitMix64 src(77);
  double sum = 0.0;
  constexpr int kTrials = 10000;
  for (int i = 0; i < kTrials; ++i) sum += static_cast<double>(sample(params, src));
  EXPECT_NEAR(sum / kTrials, 50.0, 0.15);
}

TEST(Btpe, GoodnessOfFitOnSeveralShapes) {
  for (auto params : std::vector<BinomialParams>{{20, 0.5}, {50, 0.3}, {1000, 0.01}, {200, 0.93}}) {
    const BinomialDistribution dist(params);
    ASSERT_TRUE(dist.uses_btpe());
    SplitMix64 src(0xC0FFEE);
    std::vector<std::int64_t> histogram(params.n + 1, 0);
    constexpr std::int64_t kTrials = 100000;
    for (std::int64_t i = 0; i < kTrials; ++i) ++histogram[dist(src)];
    EXPECT_GT(stats::chi_square_gof(histogram, pmf_table(params), kTrials), 0.01) << params.n << ' ' << params.p;
  }
}

// ---- dispatch --------------------------------------------------------------------

TEST(Dispatch, ChoosesPathByApplicability) {
  CountingSource btpe_src{SplitMix64{5}};
  sample({20, 0.5}, btpe_src);
  EXPECT_EQ(btpe_src.draws() % 2, 0u);
  EXPECT_GE(btpe_src.draws(), 2u);

  CountingSource inv_src{SplitMix64{5}};
  for (int i = 0; i < 100; ++i) {
    inv_src.reset();
    sample({19, 0.5}, inv_src);
    ASSERT_EQ(inv_src.draws(), 1u);
  }

  SplitMix64 src(5);
  EXPECT_EQ(sample({0, 0.3}, src), 0);
  EXPECT_THROW(sample({-3, 0.3}, src), std::invalid_argument);
  EXPECT_THROW(sample({3, 2.0}, src), std::invalid_argument);
}

TEST(Dispatch, RangeOverRandomParameters) {
  SplitMix64 pick(31337);
  SplitMix64 src(4242);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<std::int64_t>(pick.next_uniform() * 5000.0);
    const double p = pick.next_uniform();
    const BinomialDistribution dist({n, p});
    for (int i = 0; i < 50; ++i) {
      const auto k = dist(src);
      ASSERT_GE(k, 0) << n << ' ' << p;
      ASSERT_LE(k, n) << n << ' ' << p;
    }
  }
}

TEST(Dispatch, ReflectionSymmetry) {
  for (auto [n, p] : std::vector<std::pair<std::int64_t, double>>{
           {20, 0.25}, {19, 0.25}, {64, 10.0 / 64}, {1000, 0.375}, {7, 0.125},
           {200, 0.1}, {60, 0.3}, {19, 0.1}, {3000, 10.0 / 3000}}) {
    SplitMix64 a(9), b(9);
    for (int i = 0; i < 2000; ++i) ASSERT_EQ(sample({n, p}, a), n - sample({n, 1.0 - p}, b)) << n << ' ' << p;
  }
}
