#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "btpe/uniform_source.hpp"

using namespace btpe;

// Reference outputs of splitmix64 from seed 0 (Vigna's splitmix64.c).
TEST(SplitMix64, ReferenceSequenceFromSeedZero) {
  SplitMix64 gen(0);
  EXPECT_EQ(gen.next_raw(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(gen.next_raw(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(gen.next_raw(), 0x06C45D188009454FULL);
}

TEST(SplitMix64, FreeFunctionAdvancesByGamma) {
  const auto step = next_raw(0);
  EXPECT_EQ(step.state, kSplitMixGamma);
  EXPECT_EQ(step.word, 0xE220A8397B1DCDAFULL);
  static_assert(next_raw(0).word == 0xE220A8397B1DCDAFULL);
}

TEST(SplitMix64, SameSeedSameStream) {
  SplitMix64 a(0xDEADBEEF), b(0xDEADBEEF);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_raw(), b.next_raw()) << "at " << i;
}

TEST(SplitMix64, PrefixIsDistinct) {
  SplitMix64 gen(0);
  const auto w1 = gen.next_raw(), w2 = gen.next_raw(), w3 = gen.next_raw();
  EXPECT_NE(w1, w2);
  EXPECT_NE(w2, w3);
  EXPECT_NE(w1, w3);
}

TEST(UnitInterval, EndPoints) {
  EXPECT_EQ(to_unit_interval(0), 0.0);
  EXPECT_EQ(to_unit_interval(std::uint64_t{1} << 11), std::ldexp(1.0, -53));
  const double top = to_unit_interval(~std::uint64_t{0});
  EXPECT_EQ(top, (std::ldexp(1.0, 53) - 1.0) / std::ldexp(1.0, 53));
  EXPECT_LT(top, 1.0);
  // Low 11 bits are discarded.
  EXPECT_EQ(to_unit_interval(0x7FF), 0.0);
}

TEST(UnitInterval, RangeAndMeanOverAMillionDraws) {
  SplitMix64 gen(12345);
  double sum = 0.0;
  constexpr int kDraws = 1'000'000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = gen.next_uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / kDraws, 0.5, 0.002);
}

TEST(CountingSource, CountsEveryDraw) {
  CountingSource counter{SplitMix64{7}};
  EXPECT_EQ(counter.draws(), 0u);
  for (int i = 0; i < 3; ++i) counter.next_uniform();
  EXPECT_EQ(counter.draws(), 3u);
  counter.reset();
  EXPECT_EQ(counter.draws(), 0u);
}

TEST(CountingSource, DoesNotAlterValues) {
  SplitMix64 plain(99);
  CountingSource wrapped{SplitMix64{99}};
  for (int i = 0; i < 500; ++i) ASSERT_EQ(wrapped.next_uniform(), plain.next_uniform());
  EXPECT_EQ(wrapped.draws(), 500u);
}

TEST(BlockSplitMix64, MatchesScalarStreamAcrossRefills) {
  for (std::uint64_t seed : {0ULL, 1ULL, 0xFFFFFFFFFFFFFFFFULL, 0x123456789ABCDEFULL}) {
    SplitMix64 plain(seed);
    BlockSplitMix64 block(seed);
    for (std::size_t i = 0; i < 3 * BlockSplitMix64::kBlock + 17; ++i)
      ASSERT_EQ(block.next_uniform(), plain.next_uniform()) << "seed " << seed << " at " << i;
  }
}

static_assert(UniformSource<SplitMix64>);
static_assert(UniformSource<BlockSplitMix64>);
static_assert(UniformSource<CountingSource<SplitMix64>>);
