#include "orgnorms/seeding.hpp"

#include <bit>

namespace orgnorms {

Seed mix64(Seed x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed base, std::initializer_list<std::uint64_t> coords) noexcept {
  Seed h = mix64(base);
  for (std::uint64_t c : coords) {
    h = mix64(h ^ mix64(c));
  }
  return h;
}

std::uint64_t double_bits(double v) noexcept {
  return std::bit_cast<std::uint64_t>(v);
}

}  // namespace orgnorms
