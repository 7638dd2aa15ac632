// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace fmux {

/// Philox4x32-10 counter-based generator. A block is a pure function of
/// (counter, key), so any (seed, bin) pair indexes its own random stream
/// regardless of how bins are distributed over workers.
struct Philox4x32 {
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kW0;
      key[1] += kW1;
    }
    return ctr;
  }
};

/// Random stream dedicated to one simulation bin: key = seed, counter =
/// (bin index, block index). Draw order within a bin is part of the
/// simulation contract; streams of distinct bins are independent.
class BinRng {
 public:
  BinRng(std::uint64_t seed, std::uint64_t bin_index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        bin_lo_(static_cast<std::uint32_t>(bin_index)),
        bin_hi_(static_cast<std::uint32_t>(bin_index >> 32)) {}

  std::uint64_t next_u64() {
    if (have_ == 0) {
      const auto out = Philox4x32::block({bin_lo_, bin_hi_, block_, 0u}, key_);
      ++block_;
      buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
      buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
      have_ = 2;
    }
    return buf_[--have_];
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Number of failures before success: P(n) = (1 - q) q^n, n >= 0.
  /// This is the pair-number distribution of a thermal mode with q = |xi|^2.
  int geometric(double q) {
    if (q <= 0.0) return 0;
    const double u = uniform();           // 1 - u in (0, 1]
    return static_cast<int>(std::log1p(-u) / std::log(q));
  }

  /// Knuth's product method; intended for small lambda (background noise).
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int n = -1;
    double prod = 1.0;
    do {
      prod *= uniform();
      ++n;
    } while (prod > limit);
    return n;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t bin_lo_;
  std::uint32_t bin_hi_;
  std::uint32_t block_ = 0;
  std::uint64_t buf_[2] = {0, 0};
  int have_ = 0;
};

}  // namespace fmux
