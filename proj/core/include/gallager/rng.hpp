// Copyright 2026 The gallager-forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

namespace gallager {

/// splitmix64 finalizer; used for seeding and for deriving decorrelated
/// per-trial stream seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// xoshiro256** stream.  Bit-stable across platforms: no standard-library
/// distributions are involved anywhere in the sampling path.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t next_u64() noexcept {
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

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection-free modulo of the high bits.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept {
    // Lemire's multiply-shift; deterministic and unbiased enough for
    // simulation indices (bound << 2^64 in all uses here).
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(bound);
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

/// Independent stream for trial `trial` under master seed `seed`.  Trials can
/// run on any worker in any order and still reproduce bit-identically.
inline RngStream trial_stream(std::uint64_t seed, std::uint64_t trial) noexcept {
  std::uint64_t s = trial;
  const std::uint64_t mixed_trial = splitmix64_next(s);
  s = seed ^ mixed_trial;
  const std::uint64_t stream_seed = splitmix64_next(s);
  return RngStream(stream_seed);
}

}  // namespace gallager
