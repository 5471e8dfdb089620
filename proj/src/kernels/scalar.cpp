#include <cstddef>

#include "btpe/kernels.hpp"
#include "btpe/uniform_source.hpp"

namespace btpe::kernels {
namespace {

constexpr std::size_t kLanes = 4;

std::uint64_t fill_uniforms(std::uint64_t state, std::span<double> out) {
  for (double& u : out) {
    const auto step = next_raw(state);
    state = step.state;
    u = to_unit_interval(step.word);
  }
  return state;
}

double lane_sum(const double (&acc)[kLanes]) {
  return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

Moments moments(std::span<const double> xs) {
  Moments m;
  if (xs.empty()) return m;
  const std::size_t body = xs.size() - xs.size() % kLanes;

  double acc[kLanes] = {};
  for (std::size_t i = 0; i < body; i += kLanes)
    for (std::size_t l = 0; l < kLanes; ++l) acc[l] += xs[i + l];
  double sum = lane_sum(acc);
  for (std::size_t i = body; i < xs.size(); ++i) sum += xs[i];
  m.sum = sum;
  m.mean = sum / static_cast<double>(xs.size());

  double dev[kLanes] = {};
  for (std::size_t i = 0; i < body; i += kLanes)
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double d = xs[i + l] - m.mean;
      dev[l] += d * d;
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
  double acc[kLanes] = {};
  for (std::size_t i = 0; i < body; i += kLanes)
    for (std::size_t l = 0; l < kLanes; ++l) {
      const double d = observed[i + l] - expected[i + l];
      acc[l] += d * d / expected[i + l];
    }
  double stat = lane_sum(acc);
  for (std::size_t i = body; i < size; ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

}  // namespace

const KernelTable& scalar() {
  static constexpr KernelTable table{"scalar", &fill_uniforms, &moments, &chi_square};
  return table;
}

}  // namespace btpe::kernels
