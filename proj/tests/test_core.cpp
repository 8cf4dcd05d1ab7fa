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


#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <vector>

#include "iqpnoise/bits.hpp"
#include "iqpnoise/parallel.hpp"
#include "iqpnoise/rng.hpp"
#include "test_support.hpp"

using namespace iqpnoise;

TEST_CASE("bit strings put character i at bit i") {
  REQUIRE(bits_to_string(0b011, 3) == "110");
  REQUIRE(bits_from_string("110", 3) == 0b011);
  REQUIRE(bits_to_string(0, 0).empty());
  for (Bits b = 0; b < 64; ++b) {
    REQUIRE(bits_from_string(bits_to_string(b, 6), 6) == b);
  }
  REQUIRE_ERROR(bits_from_string("10", 3), ErrorCode::LengthMismatch);
  REQUIRE_ERROR(bits_from_string("1a0", 3), ErrorCode::BadRange);
}

TEST_CASE("bit helpers") {
  REQUIRE(weight(0b1011) == 3);
  REQUIRE(parity(0b1011) == 1);
  REQUIRE(sign_of(0b11, 0b01) == -1.0);
  REQUIRE(sign_of(0b11, 0b11) == 1.0);
  REQUIRE(low_mask(4) == 0xF);
  REQUIRE(low_mask(64) == ~Bits{0});
  REQUIRE(join_bits(0b10, 0b1, 2) == 0b110);
}

TEST_CASE("Philox4x32-10 matches the published known-answer vectors") {
  using B = Philox::Block;
  REQUIRE(Philox::generate({0, 0, 0, 0}, {0, 0}) ==
          B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  REQUIRE(Philox::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                           {0xffffffff, 0xffffffff}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  REQUIRE(Philox::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                           {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct") {
  Philox a = make_stream(7, StreamDomain::Coefficient, 3);
  Philox b = make_stream(7, StreamDomain::Coefficient, 3);
  Philox c = make_stream(7, StreamDomain::Coefficient, 4);
  Philox d = make_stream(7, StreamDomain::Walk, 3);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    REQUIRE(va == b.next_u64());
    firsts.insert(va);
  }
  REQUIRE(firsts.size() == 100);
  REQUIRE(c.next_u64() != make_stream(7, StreamDomain::Coefficient, 3)
                              .next_u64());
  REQUIRE(d.next_u64() != make_stream(7, StreamDomain::Coefficient, 3)
                              .next_u64());
}

TEST_CASE("uniform draws lie in [0, 1) with the right mean") {
  Philox rng(11, 0);
  double sum = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 5 sigma with sigma = sqrt(1/12 / N)
  REQUIRE(std::abs(sum / kDraws - 0.5) < 5.0 * std::sqrt(1.0 / 12 / kDraws));
}

TEST_CASE("parallel_for output does not depend on the worker count") {
  auto run = [](unsigned workers) {
    std::vector<std::uint64_t> out(1000);
    parallel_for(out.size(), workers, [&](std::size_t i) {
      out[i] = make_stream(5, StreamDomain::Synthetic, i).next_u64();
    });
    return out;
  };
  const auto one = run(1);
  REQUIRE(run(3) == one);
  REQUIRE(run(8) == one);
}

TEST_CASE("parallel_for visits each index once and rethrows failures") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), 4, [&](std::size_t i) { ++hits[i]; });
  REQUIRE(std::all_of(hits.begin(), hits.end(),
                      [](const auto& h) { return h.load() == 1; }));
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
  REQUIRE_THROWS_AS(parallel_for(100, 3,
                                 [](std::size_t i) {
                                   if (i == 42) throw std::runtime_error("x");
                                 }),
                    std::runtime_error);
  REQUIRE(resolve_workers(2) == 2);
  REQUIRE(resolve_workers(0) >= 1);
}

TEST_CASE("error messages carry the code name") {
  const Error e(ErrorCode::TooLarge, "width 70");
  REQUIRE(e.code() == ErrorCode::TooLarge);
  REQUIRE(std::string(e.what()).find("TooLarge") != std::string::npos);
}
