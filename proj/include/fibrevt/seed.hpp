#pragma once

#include <cstdint>

namespace fibrevt {

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Stateless per-sample seed. For a fixed master seed distinct indices
/// always map to distinct seeds (composition of bijections).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index);

}  // namespace fibrevt
