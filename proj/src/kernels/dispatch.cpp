#include <cstdlib>
#include <string_view>

#include "btpe/kernels.hpp"

namespace btpe::kernels {

bool avx2_supported() noexcept {
#if defined(BTPE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("BTPE_KERNEL");
  if (forced != nullptr && std::string_view(forced) == "scalar") return scalar();
#if defined(BTPE_HAVE_AVX2)
  if (avx2_supported()) return avx2();
#endif
  return scalar();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace btpe::kernels
