#include "btpe/uniform_source.hpp"

#include "btpe/kernels.hpp"

namespace btpe {

void BlockSplitMix64::refill() {
  state_ = kernels::active().fill_uniforms(state_, buffer_);
  pos_ = 0;
}

}  // namespace btpe
