#include "skeptic/rng.hpp"

namespace skeptic {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  return mix(base ^ mix(fnv1a64(label)));
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index) {
  return mix(derive_seed(base, label) ^ mix(index + 0x9e3779b97f4a7c15ULL));
}

}  // namespace skeptic
