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


#include <cmath>
#include <numbers>

#include "iqpnoise/encoding.hpp"
#include "iqpnoise/oracle.hpp"
#include "test_support.hpp"

using namespace iqpnoise;
using iqpnoise::testing::Complex;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// P_IQP(z) = |2^{-N} sum_y f(y) (-1)^{y.z}|^2 by direct double sum.
std::vector<double> naive_iqp(const IqpEncoding& e) {
  const std::size_t dim = std::size_t{1} << e.width();
  std::vector<double> out(dim);
  for (Bits zj = 0; zj < dim; ++zj) {
    const Bits z = e.joint_to_physical(zj);
    Complex amp = 0.0;
    for (Bits y = 0; y < dim; ++y) {
      amp += eval_f(e, y) * sign_of(y, z);
    }
    out[zj] = std::norm(amp / static_cast<double>(dim));
  }
  return out;
}

}  // namespace

TEST_CASE("single J gate encodes to the two-wire gadget") {
  const double alpha = 0.37;
  const IqpEncoding e = encode(ChaoticCircuit(1, {JGate{0, Angle(alpha)}}));
  REQUIRE(e.n == 1);
  REQUIRE(e.m == 1);
  REQUIRE(e.width() == 2);
  REQUIRE(e.poly.linear.size() == 1);
  REQUIRE(e.poly.linear[0].wire == 0);
  REQUIRE(e.poly.linear[0].angle.radians() == Approx(alpha));
  REQUIRE(e.poly.quadratic == std::vector<std::pair<int, int>>{{0, 1}});
  REQUIRE(e.output_wires == std::vector<int>{1});
  REQUIRE(e.ancilla_order == std::vector<int>{0});
  REQUIRE(e.thread_map == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("a flipped J gate shifts its linear angle by pi") {
  JGate g{0, Angle(0.4)};
  g.flip = true;
  const IqpEncoding e = encode(ChaoticCircuit(1, {g}));
  REQUIRE(e.poly.linear[0].angle.radians() == Approx(0.4 + kPi));
}

TEST_CASE("CZ gates become quadratic terms between current wires") {
  const ChaoticCircuit c(2, {JGate{0, Angle(0.1)}, CZGate{0, 1},
                             JGate{1, Angle(0.2)}, CZGate{0, 1}});
  const IqpEncoding e = encode(c);
  REQUIRE(e.width() == 4);
  // wires: q0 0 -> 2, q1 1 -> 3
  const std::vector<std::pair<int, int>> expected{{0, 2}, {2, 1}, {1, 3}, {2, 3}};
  REQUIRE(e.poly.quadratic == expected);
  REQUIRE(e.output_wires == std::vector<int>{2, 3});
  REQUIRE(e.ancilla_order == std::vector<int>{0, 1});
}

TEST_CASE("empty circuit encodes to the empty polynomial") {
  const IqpEncoding e = encode(ChaoticCircuit(2));
  REQUIRE(e.m == 0);
  REQUIRE(e.poly.linear.empty());
  REQUIRE(e.poly.quadratic.empty());
  const ProbDist p = full_iqp_distribution(e);
  REQUIRE(p.values == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("f examples") {
  const IqpEncoding e0 = encode(ChaoticCircuit(1, {JGate{0, Angle(0.0)}}));
  REQUIRE(eval_f(e0, "00") == Complex(1.0, 0.0));
  REQUIRE(std::abs(eval_f(e0, "11") - Complex(-1.0, 0.0)) < 1e-15);
  const IqpEncoding e1 = encode(ChaoticCircuit(1, {JGate{0, Angle(kPi / 2)}}));
  REQUIRE(std::abs(eval_f(e1, "10") - Complex(0.0, 1.0)) < 1e-15);
  REQUIRE_ERROR(eval_f(e1, "1"), ErrorCode::LengthMismatch);
}

TEST_CASE("two-gate J(0) chain joint distribution") {
  // The readout equals the first flip bit; the second flip acts on |+>.
  const IqpEncoding e = encode(ChaoticCircuit(
      1, {JGate{0, Angle(0.0)}, JGate{0, Angle(0.0)}}));
  const ProbDist p = full_iqp_distribution(e);
  for (Bits xp = 0; xp < 4; ++xp) {
    const Bits x = xp & 1U;
    REQUIRE(p.values[join_bits(x, xp, 1)] == Approx(0.25));
    REQUIRE(p.values[join_bits(x ^ 1U, xp, 1)] == Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("phase evaluator agrees with f on every string") {
  const IqpEncoding e = encode(generate_random_circuit({3, 2, 4}));
  const PhaseEvaluator eval(e);
  REQUIRE(eval.width() == 9);
  for (Bits j = 0; j < (Bits{1} << 9); ++j) {
    REQUIRE(std::abs(eval.value(j) - eval_f(e, e.joint_to_physical(j))) <
            1e-12);
  }
}

TEST_CASE("joint layout is a bijection") {
  const IqpEncoding e = encode(generate_random_circuit({2, 3, 8}));
  const auto pos = e.joint_positions();
  for (int q = 0; q < e.n; ++q) REQUIRE(pos[e.output_wires[q]] == q);
  for (int j = 0; j < e.m; ++j) REQUIRE(pos[e.ancilla_order[j]] == e.n + j);
  for (Bits j = 0; j < (Bits{1} << e.width()); ++j) {
    REQUIRE(e.physical_to_joint(e.joint_to_physical(j)) == j);
  }
}

TEST_CASE("full IQP distribution matches the direct double sum") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const IqpEncoding e = encode(generate_random_circuit({2, 2, seed}));
    REQUIRE(iqpnoise::testing::max_abs_diff(full_iqp_distribution(e).values,
                                            naive_iqp(e)) < 1e-12);
  }
}

TEST_CASE("2^m P_IQP(x, x') equals P_qc(x | U_x') from the dense simulator") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = 2 + static_cast<int>(seed % 2);
    const ChaoticCircuit c = generate_random_circuit({n, 2, seed});
    const ProbDist joint = full_iqp_distribution(encode(c));
    for (Bits xp = 0; xp < (Bits{1} << c.m()); ++xp) {
      const auto ref = iqpnoise::testing::reference_probs(c, xp);
      for (Bits x = 0; x < ref.size(); ++x) {
        REQUIRE(std::ldexp(joint.values[join_bits(x, xp, n)], c.m()) ==
                Approx(ref[x]).margin(1e-10));
      }
    }
  }
}

TEST_CASE("encoding JSON round trip and validation") {
  const IqpEncoding e = encode(generate_random_circuit({3, 3, 2}));
  const std::string text = encoding_to_json(e);
  REQUIRE(encoding_from_json(text) == e);
  REQUIRE_ERROR(encoding_from_json(
                    R"({"n":1,"m":1,"linear":[],"quadratic":[],)"
                    R"("output_wires":[0],"ancilla_order":[0]})"),
                ErrorCode::BadRange);
  REQUIRE_ERROR(encoding_from_json(
                    R"({"n":1,"m":1,"linear":[[5,0.1]],"quadratic":[],)"
                    R"("output_wires":[1],"ancilla_order":[0]})"),
                ErrorCode::BadRange);
  REQUIRE_ERROR(encoding_from_json("[]"), ErrorCode::Config);
}

TEST_CASE("encodings wider than 64 bits are rejected") {
  std::vector<Gate> gates(64, JGate{0, Angle(0.1)});
  REQUIRE_ERROR(encode(ChaoticCircuit(1, gates)), ErrorCode::TooLarge);
  gates.pop_back();
  REQUIRE(encode(ChaoticCircuit(1, gates)).width() == 64);
}
