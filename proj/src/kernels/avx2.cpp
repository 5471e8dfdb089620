#include <immintrin.h>

#include <cstddef>

#include "btpe/kernels.hpp"
#include "btpe/uniform_source.hpp"

namespace btpe::kernels {
namespace {

constexpr std::size_t kLanes = 4;

// Low 64 bits of a 64x64 product; AVX2 only has 32x32->64 multiplies.
inline __m256i mullo_epi64(__m256i a, __m256i b) {
  const __m256i lo = _mm256_mul_epu32(a, b);
  const __m256i cross = _mm256_add_epi64(_mm256_mul_epu32(_mm256_srli_epi64(a, 32), b),
                                         _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32)));
  return _mm256_add_epi64(lo, _mm256_slli_epi64(cross, 32));
}

inline __m256i mix(__m256i z) {
  const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(0xBF58476D1CE4E5B9ULL));
  const __m256i m2 = _mm256_set1_epi64x(static_cast<long long>(0x94D049BB133111EBULL));
  z = mullo_epi64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 30)), m1);
  z = mullo_epi64(_mm256_xor_si256(z, _mm256_srli_epi64(z, 27)), m2);
  return _mm256_xor_si256(z, _mm256_srli_epi64(z, 31));
}

// Exact conversion of a 53-bit integer per lane: each 32-bit half is placed
// in the mantissa of 2^52 and the bias subtracted.
inline __m256d to_unit(__m256i word) {
  const __m256i x = _mm256_srli_epi64(word, 11);
  const __m256i magic = _mm256_set1_epi64x(0x4330000000000000LL);
  const __m256d two52 = _mm256_set1_pd(0x1.0p52);
  const __m256i lo_bits = _mm256_and_si256(x, _mm256_set1_epi64x(0xFFFFFFFFLL));
  const __m256i hi_bits = _mm256_srli_epi64(x, 32);
  const __m256d lo = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(lo_bits, magic)), two52);
  const __m256d hi = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(hi_bits, magic)), two52);
  const __m256d whole = _mm256_add_pd(_mm256_mul_pd(hi, _mm256_set1_pd(0x1.0p32)), lo);
  return _mm256_mul_pd(whole, _mm256_set1_pd(0x1.0p-53));
}

std::uint64_t fill_uniforms(std::uint64_t state, std::span<double> out) {
  const std::size_t body = out.size() - out.size() % kLanes;
  if (body > 0) {
    __m256i lanes = _mm256_set_epi64x(
        static_cast<long long>(state + 4 * kSplitMixGamma),
        static_cast<long long>(state + 3 * kSplitMixGamma),
        static_cast<long long>(state + 2 * kSplitMixGamma),
        static_cast<long long>(state + 1 * kSplitMixGamma));
    const __m256i stride = _mm256_set1_epi64x(static_cast<long long>(4 * kSplitMixGamma));
    for (std::size_t i = 0; i < body; i += kLanes) {
      _mm256_storeu_pd(out.data() + i, to_unit(mix(lanes)));
      lanes = _mm256_add_epi64(lanes, stride);
    }
    state += static_cast<std::uint64_t>(body) * kSplitMixGamma;
  }
  for (std::size_t i = body; i < out.size(); ++i) {
    const auto step = next_raw(state);
    state = step.state;
    out[i] = to_unit_interval(step.word);
  }
  return state;
}

double lane_sum(__m256d acc) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

Moments moments(std::span<const double> xs) {
  Moments m;
  if (xs.empty()) return m;
  const std::size_t body = xs.size() - xs.size() % kLanes;

  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(xs.data() + i));
  double sum = lane_sum(acc);
  for (std::size_t i = body; i < xs.size(); ++i) sum += xs[i];
  m.sum = sum;
  m.mean = sum / static_cast<double>(xs.size());

  const __m256d mean = _mm256_set1_pd(m.mean);
  __m256d dev = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(xs.data() + i), mean);
    dev = _mm256_add_pd(dev, _mm256_mul_pd(d, d));
  }
  double ss = lane_sum(dev);
  for (std::size_t i = body; i < xs.size(); ++i) {
    const double d = xs[i] - m.mean;
    ss += d * d;
  }
  m.sum_sq_dev = ss;
  return m;
}

double chi_square(std::span<const double> observed, std::span<const double> expected) {
  const std::size_t size = observed.size();
  const std::size_t body = size - size % kLanes;
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += kLanes) {
    const __m256d e = _mm256_loadu_pd(expected.data() + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(observed.data() + i), e);
    acc = _mm256_add_pd(acc, _mm256_div_pd(_mm256_mul_pd(d, d), e));
  }
  double stat = lane_sum(acc);
  for (std::size_t i = body; i < size; ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

}  // namespace

const KernelTable& avx2() {
  static constexpr KernelTable table{"avx2", &fill_uniforms, &moments, &chi_square};
  return table;
}

}  // namespace btpe::kernels
