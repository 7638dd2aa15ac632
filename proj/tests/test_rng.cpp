// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "fmux/event_sim.hpp"
#include "fmux/philox.hpp"

using namespace fmux;

TEST_CASE("philox4x32-10: reference known-answer vectors") {
  // Canonical test vectors for Philox4x32 with 10 rounds.
  const auto zeros = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
  CHECK(zeros == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu,
                                              0x9b00dbd8u});

  const auto ones = Philox4x32::block(
      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u,
                                             0x6d5451fdu});

  const auto pi_digits = Philox4x32::block(
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(pi_digits == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u,
                                                  0x24126ea1u});
}

TEST_CASE("bin streams: reproducible per (seed, bin), independent across bins") {
  const auto draw = [](std::uint64_t seed, std::uint64_t bin, int n) {
    BinRng rng(seed, bin);
    std::vector<std::uint64_t> out(static_cast<std::size_t>(n));
    for (auto& v : out) v = rng.next_u64();
    return out;
  };

  const auto a = draw(12345, 7, 64);
  CHECK(a == draw(12345, 7, 64));           // same stream, same values
  CHECK(a != draw(12345, 8, 64));           // neighbouring bin
  CHECK(a != draw(12346, 7, 64));           // neighbouring seed
  CHECK(a != draw(0x1'0000'3039ull, 7, 64)); // seed differing only in high word

  // Bins differing only in the high 32 bits of the index must also split.
  CHECK(draw(12345, 7, 64) != draw(12345, 7 + (1ull << 32), 64));
}

TEST_CASE("uniform: range and first moment") {
  BinRng rng(2024, 0);
  const int n = 100000;
  double sum = 0.0;
  double max_seen = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    max_seen = std::max(max_seen, u);
  }
  const double three_sigma = 3.0 / std::sqrt(12.0 * n);
  CHECK(std::abs(sum / n - 0.5) < three_sigma);
  CHECK(max_seen > 0.999);  // 53-bit uniforms fill the top of the interval
}

TEST_CASE("geometric: thermal pair-number law with mean q/(1-q)") {
  BinRng rng(99, 3);
  const double q = 0.5;
  const int n = 100000;
  long long sum = 0;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const int k = rng.geometric(q);
    CHECK(k >= 0);
    sum += k;
    zeros += (k == 0);
  }
  // mean = q/(1-q) = 1, variance = q/(1-q)^2 = 2
  CHECK(std::abs(static_cast<double>(sum) / n - 1.0) < 3.0 * std::sqrt(2.0 / n));
  // P(0) = 1 - q = 0.5
  CHECK(std::abs(static_cast<double>(zeros) / n - 0.5) <
        3.0 * std::sqrt(0.25 / n));

  BinRng rng2(99, 4);
  CHECK(rng2.geometric(0.0) == 0);
}

TEST_CASE("poisson: small-rate mean") {
  BinRng rng(7, 11);
  const double lambda = 3.0;
  const int n = 100000;
  long long sum = 0;
  for (int i = 0; i < n; ++i) sum += rng.poisson(lambda);
  CHECK(std::abs(static_cast<double>(sum) / n - lambda) <
        3.0 * std::sqrt(lambda / n));

  BinRng rng2(7, 12);
  CHECK(rng2.poisson(0.0) == 0);
}

TEST_CASE("bucket detector: click law 1 - (1 - eta)^n, dark and unit-efficiency edges") {
  BinRng rng(31337, 5);
  const int n = 100000;
  int clicks = 0;
  for (int i = 0; i < n; ++i) clicks += bucket_click(2, 0.5, 0.0, rng) ? 1 : 0;
  const double p = 0.75;  // 1 - (1 - 0.5)^2
  CHECK(std::abs(static_cast<double>(clicks) / n - p) <
        3.0 * std::sqrt(p * (1.0 - p) / n));

  BinRng edge(1, 1);
  for (int i = 0; i < 32; ++i) {
    CHECK_FALSE(bucket_click(0, 0.9, 0.0, edge));  // no photons, no darks
    CHECK(bucket_click(0, 0.9, 1.0, edge));        // certain dark count
    CHECK(bucket_click(3, 1.0, 0.0, edge));        // perfect detector
  }
}
