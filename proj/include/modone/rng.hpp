#pragma once

#include <cstdint>

namespace modone::rng {

// Counter-based draws: every value is a pure function of (seed, stream, index),
// so z_n never depends on N, thread count or evaluation order.

enum class Stream : std::uint64_t {
  kPerturbation = 0x7a5f'0001,
  kAlpha = 0x7a5f'0002,
  kUniformPoints = 0x7a5f'0003,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(stream)));
  return splitmix64(h ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

// Uniform on [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t seed, Stream stream, std::uint64_t index) {
  return static_cast<double>(counter_hash(seed, stream, index) >> 11) * 0x1.0p-53;
}

}  // namespace modone::rng
