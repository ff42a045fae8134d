#include "ordsim/rng.hpp"

namespace ordsim {

RngStream split_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
  return RngStream(master_seed, stream_index);
}

}  // namespace ordsim
