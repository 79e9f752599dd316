// Copyright 2026 The ranksel Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

namespace ranksel::rng {

// Philox4x64-10 counter-based generator (Salmon et al., Random123 family).
// Every 256-bit counter maps to an independent 256-bit block, so a draw can
// be addressed directly by (seed, replication, population, draw index) and
// results do not depend on thread scheduling. Output blocks match
// numpy.random.Philox for the same counter/key.
struct Block {
  std::array<std::uint64_t, 4> w;
};

namespace detail {
inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}
}  // namespace detail

inline Block philox4x64_10(std::array<std::uint64_t, 4> ctr, std::array<std::uint64_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    detail::mulhilo(kM0, ctr[0], hi0, lo0);
    detail::mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return Block{ctr};
}

// Map to the open interval (0,1); the odd-numerator form never rounds to an
// endpoint, so inverse-cdf sampling stays finite.
inline double to_unit(std::uint64_t v) {
  return static_cast<double>(((v >> 12) << 1) | 1u) * 0x1.0p-53;
}

// One addressable uniform draw. `tag` separates logical streams (stage-one
// samples, MC replications, ...) that share a seed.
inline double uniform_at(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                         std::uint64_t c, std::uint64_t tag) {
  const Block blk = philox4x64_10({a, b, c, tag}, {seed, 0x243F6A8885A308D3ULL});
  return to_unit(blk.w[0]);
}

// Sequential substream for samplers that need a variable number of draws
// (rejection loops). The stream identity is fixed by (seed, a, b, tag); the
// fourth counter word advances per draw.
class SubStream {
 public:
  SubStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t tag)
      : key_{seed, 0x452821E638D01377ULL}, ctr_{a, b, 0, tag}, pos_(4) {}

  double next_uniform() { return to_unit(next_word()); }

  std::uint64_t next_word() {
    if (pos_ == 4) {
      blk_ = philox4x64_10(ctr_, key_);
      ++ctr_[2];
      pos_ = 0;
    }
    return blk_.w[pos_++];
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_;
  Block blk_{};
  int pos_;
};

}  // namespace ranksel::rng
