#pragma once

#include <cstdint>
#include <limits>

namespace netclust {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Hashes a tuple of counters into 64 random bits. Every random quantity in
// the library is a pure function of (seed, stream, indices...), so results do
// not depend on evaluation order or thread count.
constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t a = 0, std::uint64_t b = 0,
                                     std::uint64_t c = 0) noexcept {
  std::uint64_t z = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  z = mix64(z ^ stream);
  z = mix64(z ^ (a * 0xD1B54A32D192ED03ULL));
  z = mix64(z ^ (b * 0xABC98388FB8FAC03ULL));
  z = mix64(z ^ (c * 0x8CB92BA72F3D8DD7ULL));
  return z;
}

// Maps 64 bits to a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Maps 64 bits to a double in the open interval (0, 1).
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Named streams keep independent uses of the same seed decorrelated.
enum class Stream : std::uint64_t {
  latent = 1,
  edge = 2,
  component = 3,
  kmeans = 4,
  corpus = 5,
  probe = 6,
};

// Sequential generator over the counter hash; satisfies
// UniformRandomBitGenerator so it can drive std::shuffle and friends.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, Stream stream, std::uint64_t key = 0)
      : seed_(seed), stream_(static_cast<std::uint64_t>(stream)), key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return counter_bits(seed_, stream_, key_, counter_++); }

  double uniform() { return to_unit((*this)()); }

  // Uniform integer in [0, bound). Lemire's multiply-shift; the bias is
  // below 2^-32 for the bounds used here.
  std::uint64_t below(std::uint64_t bound) {
    const auto wide = static_cast<unsigned __int128>((*this)()) * bound;
    return static_cast<std::uint64_t>(wide >> 64);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace netclust
