#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace samba {

// SplitMix64 finalizer. Used both to seed the per-replication generator and
// to derive independent stream seeds from a base seed plus indices.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Per-replication seed: the base seed is folded with the agent, instance and
// run indices one at a time through mix64. Distinct index triples give
// unrelated streams; the mapping is stable across builds.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t agent,
                                    std::uint64_t instance,
                                    std::uint64_t run) noexcept {
  std::uint64_t h = mix64(base);
  h = mix64(h ^ (agent + 0x1000000000000000ULL));
  h = mix64(h ^ (instance + 0x2000000000000000ULL));
  h = mix64(h ^ (run + 0x3000000000000000ULL));
  return h;
}

// Single-owner random stream. Wraps std::mt19937_64 (whose output sequence is
// fixed by the standard) seeded from mix64(seed). Uniform doubles are built
// from the top 53 bits so they do not depend on the standard library's
// distribution implementations. Satisfies UniformRandomBitGenerator so the
// std distributions (gamma, for Thompson sampling) can draw from it.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

__extension__ using uint128_t = unsigned __int128;

inline std::uint64_t RngStream::below(std::uint64_t n) {
  uint128_t m = static_cast<uint128_t>(engine_()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<uint128_t>(engine_()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace samba
