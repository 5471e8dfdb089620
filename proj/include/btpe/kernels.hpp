#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference and, where
// the CPU allows it, a SIMD variant. Variants must agree bit for bit: the
// scalar reference keeps the same four-lane accumulation order as the
// vector code, and all kernel sources are built with -ffp-contract=off.

#include <cstdint>
#include <span>
#include <string_view>

namespace btpe::kernels {

/// First and second central moments of a sample, accumulated in four
/// interleaved lanes.
struct Moments {
  double sum = 0.0;
  double mean = 0.0;
  double sum_sq_dev = 0.0;  // sum of (x - mean)^2
};

using FillUniformsFn = std::uint64_t (*)(std::uint64_t state, std::span<double> out);
using MomentsFn = Moments (*)(std::span<const double> xs);
using ChiSquareFn = double (*)(std::span<const double> observed,
                               std::span<const double> expected);

struct KernelTable {
  std::string_view name;
  FillUniformsFn fill_uniforms;  // returns the advanced generator state
  MomentsFn moments;
  ChiSquareFn chi_square;  // sum (O - E)^2 / E
};

const KernelTable& scalar();
#if defined(BTPE_HAVE_AVX2)
const KernelTable& avx2();
#endif

/// True when the running CPU can execute the AVX2 table.
bool avx2_supported() noexcept;

/// Table chosen once per process. BTPE_KERNEL=scalar forces the reference
/// path; otherwise the widest supported variant wins.
const KernelTable& active();

}  // namespace btpe::kernels
