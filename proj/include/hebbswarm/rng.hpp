// Deterministic random streams for simulation and evolution.
//
// Every random draw in the project goes through Rng, a xoshiro256++ engine
// seeded via splitmix64. Streams are split by key derivation, not by engine
// jumps: derive_key(master, {a, b, c}) hashes the path elements into a new
// 64-bit key, so a trial seeded by (generation, individual, repeat) gets the
// same stream no matter which worker thread runs it or in which order.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace hebbswarm {

// splitmix64 finalizer. Used both for key derivation and engine seeding.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Folds a path of counters into a parent key. Order-sensitive.
constexpr std::uint64_t derive_key(std::uint64_t parent,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = mix64(parent);
  for (std::uint64_t e : path) k = mix64(k ^ mix64(e));
  return k;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) {
      s = mix64(s);
      w = s;
    }
  }

  // xoshiro256++
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = n * (~std::uint64_t{0} / n);
    std::uint64_t u;
    do {
      u = next_u64();
    } while (u >= limit);
    return u % n;
  }

  // Standard normal via Box-Muller. Always consumes exactly two uniforms so
  // the engine state is a pure function of the number of draws.
  double normal();

  double normal(double mean, double std) { return mean + std * normal(); }

  std::array<std::uint64_t, 4> state() const { return state_; }
  void set_state(const std::array<std::uint64_t, 4>& s) { state_ = s; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace hebbswarm
