#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace alloysim {

/// Seedable random stream with explicit, platform-stable transforms.
///
/// Every Monte Carlo entry point records the seed it was given and derives
/// substreams through `substream`, so an experiment keyed (seed, trial,
/// group, worker) reproduces the exact same draws regardless of thread
/// scheduling or of how many sibling streams exist. Derivation uses
/// splitmix64 over the key sequence; the stream itself is xoshiro256**.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) word = split_mix(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) without modulo bias.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  bool bernoulli(double p) { return next_unit() < p; }

  double exponential(double lambda) {
    double u = next_unit();
    // keep log argument away from 0
    while (u <= 0.0) u = next_unit();
    return -std::log(1.0 - u) / lambda;
  }

  /// Standard normal via Box-Muller; no cached second value, so the draw
  /// count per call is fixed and streams stay alignment-stable.
  double normal() {
    double u1 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Derives an independent stream from (key...) applied to this stream's
  /// seed material. Does not advance this stream.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return split_mix(x);
  }

  static Rng substream(std::uint64_t key) { return Rng(key); }
  static Rng substream(std::uint64_t key, std::uint64_t a) { return Rng(mix(key, a)); }
  static Rng substream(std::uint64_t key, std::uint64_t a, std::uint64_t b) {
    return Rng(mix(mix(key, a), b));
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t split_mix(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4];
};

}  // namespace alloysim
