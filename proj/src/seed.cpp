#include "fibrevt/seed.hpp"

namespace fibrevt {

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index) {
    return mix64(mix64(master_seed) ^ mix64(sample_index + 0x9E3779B97F4A7C15ull));
}

}  // namespace fibrevt
