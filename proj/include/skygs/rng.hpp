#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace skygs {

// Stream tags separate independent random processes derived from one seed.
enum class Stream : std::uint64_t {
  kGslNoise = 1,
  kDailyVolume = 2,
  kDutyPhase = 3,
  kBrokerRandom = 4,
};

namespace detail {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based key derivation: the result depends only on the master seed,
// the stream tag and the given coordinates, never on call order.
inline std::uint64_t derive_key(std::uint64_t seed, Stream stream,
                                std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = detail::mix64(seed ^ detail::mix64(static_cast<std::uint64_t>(stream)));
  for (std::uint64_t c : coords) h = detail::mix64(h ^ detail::mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

// Uniform double in [0, 1) from the top 53 bits of a key.
inline double key_to_unit(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

inline double keyed_uniform(std::uint64_t seed, Stream stream,
                            std::initializer_list<std::uint64_t> coords, double lo, double hi) {
  return lo + (hi - lo) * key_to_unit(derive_key(seed, stream, coords));
}

// A sequential engine for draws that need more than one number per key.
inline std::mt19937_64 keyed_engine(std::uint64_t seed, Stream stream,
                                    std::initializer_list<std::uint64_t> coords) {
  return std::mt19937_64(derive_key(seed, stream, coords));
}

}  // namespace skygs
