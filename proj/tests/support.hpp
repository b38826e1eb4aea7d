#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bcml/padic.hpp"

namespace bcml::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed'b0c1ULL);
  return gen;
}

inline long uniform(long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng());
}

inline Integer random_below(const Integer& m) {
  // Enough random limbs for the moduli used in tests.
  Integer r = 0;
  for (int i = 0; i < 4; ++i) {
    r <<= 62;
    r += Integer(static_cast<unsigned long>(rng()() >> 2));
  }
  return mod(r, m);
}

inline PadicNumber random_element(const ContextPtr& ctx) {
  std::vector<Integer> c(ctx->f());
  for (auto& x : c) x = random_below(ctx->modulus());
  return PadicNumber(ctx, c);
}

inline PadicNumber random_unit(const ContextPtr& ctx) {
  while (true) {
    PadicNumber x = random_element(ctx);
    auto v = valuation(x);
    if (v && *v == 0) return x;
  }
}

}  // namespace bcml::testing
