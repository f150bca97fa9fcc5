/*
 * Copyright (C) 2026 The braket authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BRAKET_RANDOM_HPP
#define BRAKET_RANDOM_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace braket {

// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Which of the two processes of a pair a stream drives.
enum class Side : std::uint32_t { ket = 0, bra = 1 };

/// Independent random stream addressed by (master seed, stream index, side).
///
/// The key is a hash of (seed, side); the counter holds the stream index in
/// its upper half and the draw number in its lower half. No state is shared
/// between streams, so results never depend on which thread runs a stream.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream, Side side = Side::ket) {
    const std::uint64_t k = splitmix64(seed ^ splitmix64(0x5bd1e995ull + static_cast<std::uint64_t>(side)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    stream_ = stream;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (buffered_ == 0) refill();
    const auto idx = 2 - buffered_;
    --buffered_;
    return (std::uint64_t{block_[2 * idx + 1]} << 32) | block_[2 * idx];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Exponential with the given rate; +inf for rate 0.
  double exponential(double rate) {
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log1p(-uniform()) / rate;
  }

  std::uint64_t draws() const { return draw_; }

 private:
  void refill() {
    const Philox4x32::Counter ctr = {static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32),
                                     static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
    block_ = Philox4x32::apply(ctr, key_);
    ++draw_;
    buffered_ = 2;
  }

  Philox4x32::Key key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t draw_ = 0;
  Philox4x32::Counter block_{};
  int buffered_ = 0;
};

}  // namespace braket

#endif  // BRAKET_RANDOM_HPP
