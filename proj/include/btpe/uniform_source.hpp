#pragma once

#include <array>
#include <concepts>
#include <cstddef>
#include <cstdint>

namespace btpe {

// Anything that hands out doubles uniform on [0, 1).
template <class S>
concept UniformSource = requires(S& s) {
  { s.next_uniform() } -> std::same_as<double>;
};

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

/// splitmix64 output function: two xor-shift-multiply rounds and a final
/// xor-shift. Also used on its own to derive seeds.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SplitMixStep {
  std::uint64_t state;
  std::uint64_t word;
};

/// One step of the reference splitmix64 stream.
constexpr SplitMixStep next_raw(std::uint64_t state) noexcept {
  state += kSplitMixGamma;
  return {state, splitmix64_mix(state)};
}

/// Top 53 bits scaled by 2^-53, so the result lies in [0, 1).
constexpr double to_unit_interval(std::uint64_t word) noexcept {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// Deterministic 64-bit generator. Not thread-safe; give each thread its own.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  constexpr std::uint64_t next_raw() noexcept {
    const auto step = btpe::next_raw(state_);
    state_ = step.state;
    return step.word;
  }

  constexpr double next_uniform() noexcept { return to_unit_interval(next_raw()); }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

/// Same stream as SplitMix64, produced a block at a time through the
/// vectorised fill kernel.
class BlockSplitMix64 {
 public:
  static constexpr std::size_t kBlock = 256;

  explicit BlockSplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  double next_uniform() {
    if (pos_ == kBlock) refill();
    return buffer_[pos_++];
  }

 private:
  void refill();

  std::uint64_t state_;
  std::size_t pos_ = kBlock;
  std::array<double, kBlock> buffer_{};
};

/// Decorator that counts how many uniforms pass through it. Values are
/// forwarded unchanged.
template <UniformSource S>
class CountingSource {
 public:
  explicit CountingSource(S inner) : inner_(std::move(inner)) {}

  double next_uniform() {
    ++draws_;
    return inner_.next_uniform();
  }

  std::uint64_t draws() const noexcept { return draws_; }
  void reset() noexcept { draws_ = 0; }

  S& inner() noexcept { return inner_; }
  const S& inner() const noexcept { return inner_; }

 private:
  S inner_;
  std::uint64_t draws_ = 0;
};

}  // namespace btpe
