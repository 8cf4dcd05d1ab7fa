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

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace iqpnoise {

/// Packed bit string. Bit i holds position i (qubit / wire i); at most 64
/// positions, which bounds the Fourier pipeline to n + m <= 64.
using Bits = std::uint64_t;

inline constexpr int kMaxBits = 64;

inline int weight(Bits b) noexcept { return std::popcount(b); }

inline int parity(Bits b) noexcept { return std::popcount(b) & 1; }

/// (-1)^{a.b}
inline double sign_of(Bits a, Bits b) noexcept {
  return parity(a & b) ? -1.0 : 1.0;
}

inline Bits low_mask(int width) noexcept {
  return width >= 64 ? ~Bits{0} : (Bits{1} << width) - 1;
}

inline bool test_bit(Bits b, int i) noexcept { return (b >> i) & 1U; }

/// "0"/"1" text with character i describing bit i.
std::string bits_to_string(Bits b, int width);

/// Parses "0"/"1" text; throws LengthMismatch when the text length differs
/// from `width` and BadRange on other characters.
Bits bits_from_string(std::string_view text, int width);

/// Concatenates a system string x (n bits) and ancilla string x' (m bits)
/// into the joint layout used by every 2^(n+m) table: x in the low n bits.
inline Bits join_bits(Bits x, Bits xp, int n) noexcept { return x | (xp << n); }

}  // namespace iqpnoise
