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

#include "iqpnoise/bits.hpp"
#include "iqpnoise/error.hpp"
#include "iqpnoise/parallel.hpp"
#include "iqpnoise/rng.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace iqpnoise {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonUnitaryInput: return "NonUnitaryInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::BadEpsilon: return "BadEpsilon";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::BothBranchesNonpositive: return "BothBranchesNonpositive";
    case ErrorCode::NonpositiveNormalization: return "NonpositiveNormalization";
    case ErrorCode::InfiniteEntropy: return "InfiniteEntropy";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

std::string bits_to_string(Bits b, int width) {
  std::string out(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if (test_bit(b, i)) out[static_cast<std::size_t>(i)] = '1';
  }
  return out;
}

Bits bits_from_string(std::string_view text, int width) {
  if (static_cast<int>(text.size()) != width) {
    throw Error(ErrorCode::LengthMismatch,
                "bit string '" + std::string(text) + "' has length " +
                    std::to_string(text.size()) + ", expected " +
                    std::to_string(width));
  }
  if (width > kMaxBits) {
    throw Error(ErrorCode::TooLarge, "bit strings are limited to 64 positions");
  }
  Bits out = 0;
  for (int i = 0; i < width; ++i) {
    const char c = text[static_cast<std::size_t>(i)];
    if (c == '1') {
      out |= Bits{1} << i;
    } else if (c != '0') {
      throw Error(ErrorCode::BadRange,
                  "bit string may only contain '0' and '1': " +
                      std::string(text));
    }
  }
  return out;
}

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

}  // namespace

Philox::Block Philox::generate(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t threads =
      std::min<std::size_t>(resolve_workers(workers), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::exception_ptr> failures(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&body, &failure = failures[t], begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) body(i);
        } catch (...) {
          failure = std::current_exception();
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

}  // namespace iqpnoise
