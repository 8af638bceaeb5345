#pragma once

#include <cstdint>

#include "kleinian/types.hpp"

namespace kleinian {

// splitmix64; fixed here so seeded streams are identical on every platform
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53-bit mantissa
  Real next_real() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * next_real(); }

  Complex uniform_box(Real re_half, Real im_half) {
    Real re = uniform(-re_half, re_half);
    Real im = uniform(-im_half, im_half);
    return {re, im};
  }

 private:
  std::uint64_t state_;
};

}  // namespace kleinian
