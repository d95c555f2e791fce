#pragma once

#include <cstdint>

namespace omegalab {

// xoshiro256** seeded through SplitMix64 from (seed, stream_id).
// Identical (seed, stream_id) reproduce identical draws on every platform;
// distinct stream_ids give statistically independent streams, which is what
// the sampling harness shards on.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1);
    for (auto& word : state_) {
      z += 0x9E3779B97F4A7C15ULL;
      std::uint64_t s = z;
      s = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9ULL;
      s = (s ^ (s >> 27)) * 0x94D049BB133111EBULL;
      word = s ^ (s >> 31);
    }
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

  // Uniform on [0,1) with 53 random bits; mapping fixed for reproducibility.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

}  // namespace omegalab
