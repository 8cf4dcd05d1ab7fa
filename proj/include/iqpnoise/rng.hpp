// Copyright 2026 The iqpnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace iqpnoise {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A stream is identified by (seed, stream id); the block counter walks
/// through it. Two streams with different ids never share a block, so work
/// items can draw from their own stream in any order on any thread and
/// produce identical numbers.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  /// Raw Philox4x32-10 bijection.
  static Block generate(Block counter, Key key) noexcept;

  std::uint64_t next_u64() noexcept {
    if (half_ == 2) refill();
    const std::uint64_t lo = buffer_[2 * half_];
    const std::uint64_t hi = buffer_[2 * half_ + 1];
    ++half_;
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // UniformRandomBitGenerator surface so <algorithm> can consume it.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  void refill() noexcept {
    buffer_ = generate({static_cast<std::uint32_t>(block_),
                        static_cast<std::uint32_t>(block_ >> 32),
                        static_cast<std::uint32_t>(stream_),
                        static_cast<std::uint32_t>(stream_ >> 32)},
                       key_);
    ++block_;
    half_ = 0;
  }

  Key key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  int half_ = 2;
};

/// Stream-id namespaces so different consumers of one seed never collide.
enum class StreamDomain : std::uint64_t {
  CircuitAngles = 1,
  VariantChoice = 2,
  Coefficient = 3,
  Walk = 4,
  Trajectory = 5,
  Synthetic = 6,
};

inline std::uint64_t stream_id(StreamDomain domain, std::uint64_t index) {
  return (static_cast<std::uint64_t>(domain) << 56) ^ index;
}

inline Philox make_stream(std::uint64_t seed, StreamDomain domain,
                          std::uint64_t index) {
  return Philox(seed, stream_id(domain, index));
}

}  // namespace iqpnoise
