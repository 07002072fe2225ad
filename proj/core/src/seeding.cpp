#include "sobreg/seeding.hpp"

namespace sobreg {

namespace {

// FNV-1a over the key bytes.
std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view cell_key) {
  std::uint64_t state = master_seed ^ fnv1a(cell_key);
  std::uint64_t a = splitmix64(state);
  std::uint64_t b = splitmix64(state);
  return a ^ (b << 1);
}

double uniform_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed + index * 0x9e3779b97f4a7c15ull;
  std::uint64_t x = splitmix64(state);
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace sobreg
