#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace plsga {

/// SplitMix64 output function. Bijective, so distinct inputs never collide.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a path of tags, e.g.
/// derive_seed(master, {generation, slot}). Order of tags matters.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t t : tags) {
    h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  }
  return h;
}

/// Seeded random stream. All sampling helpers are implemented on top of the
/// raw 64-bit engine output so results are identical across standard
/// library implementations.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return engine_(); }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection sampling on the largest multiple of n below 2^64.
    const std::uint64_t limit = max() - (max() % n + 1) % n;
    std::uint64_t draw = engine_();
    while (draw > limit) {
      draw = engine_();
    }
    return draw % n;
  }

  bool coin() { return (engine_() >> 63) != 0; }

  /// Independent stream keyed by this stream's seed and the given tags.
  RandomStream substream(std::initializer_list<std::uint64_t> tags) const {
    return RandomStream(derive_seed(seed_, tags));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven by RandomStream::uniform_index.
template <typename T>
void shuffle(std::span<T> values, RandomStream& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    using std::swap;
    swap(values[i - 1], values[j]);
  }
}

}  // namespace plsga
