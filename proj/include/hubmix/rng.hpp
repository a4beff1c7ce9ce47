#pragma once

#include <random>

#include "hubmix/types.hpp"

namespace hubmix {

// One SplitMix64 step. Used for seed derivation, not as the main generator.
inline u64 splitmix64(u64& state) {
  state += 0x9e3779b97f4a7c15ull;
  u64 z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives a per-stream seed from a base seed and a stream index. Trial i
// always maps to the same seed no matter which worker picks it up.
inline u64 mix_seed(u64 base, u64 stream) {
  u64 s = base;
  u64 a = splitmix64(s);
  s = base ^ (stream * 0x9e3779b97f4a7c15ull + 0x165667b19e3779f9ull);
  u64 b = splitmix64(s);
  return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
}

// Seedable generator with portable output mappings. std::mt19937_64 itself is
// fully specified by the standard; std::uniform_*_distribution is not, so the
// mappings below are spelled out by hand.
class Rng {
 public:
  explicit Rng(u64 seed) : engine_(seed) {}

  u64 next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1): odd numerator over 2^53, never exactly 0 or 1.
  double uniform_open01() {
    return static_cast<double>((engine_() >> 11) | 1ull) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), rejection method, no modulo bias.
  u64 below(u64 bound) {
    const u64 threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const u64 r = engine_();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hubmix
