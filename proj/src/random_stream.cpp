#include "tamech/random_stream.hpp"

namespace tamech {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t replication,
                           std::uint64_t bidder) noexcept
    : key_(mix64(mix64(mix64(seed) ^ replication) ^ (bidder * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t RandomStream::next_u64() noexcept {
  // Two rounds so neighbouring keys and counters decorrelate.
  return mix64(mix64(key_ + 0x632be59bd9b4e019ULL * counter_++) ^ key_);
}

double RandomStream::next_unit() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

}  // namespace tamech
