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
#include <complex>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "iqpnoise/bits.hpp"

namespace iqpnoise {

/// Rotation angle in radians, always reduced to [0, 2*pi).
class Angle {
 public:
  Angle() = default;
  explicit Angle(double radians);

  double radians() const noexcept { return radians_; }

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  double radians_ = 0.0;
};

/// J(alpha) = H Z(alpha) on one wire. `flip` marks the Pauli-X inserted right
/// after this gate in a variant circuit.
struct JGate {
  int wire = 0;
  Angle angle;
  bool flip = false;

  friend bool operator==(const JGate&, const JGate&) = default;
};

struct CZGate {
  int wire_a = 0;
  int wire_b = 1;

  friend bool operator==(const CZGate&, const CZGate&) = default;
};

using Gate = std::variant<JGate, CZGate>;

/// Ordered {J, CZ} circuit acting on |+>^n. m (the J count) is derived.
class ChaoticCircuit {
 public:
  explicit ChaoticCircuit(int n, std::vector<Gate> gates = {});

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }

  friend bool operator==(const ChaoticCircuit&, const ChaoticCircuit&) =
      default;

 private:
  int n_;
  int m_ = 0;
  std::vector<Gate> gates_;
};

/// Bit string x' selecting which J gates are followed by a Pauli-X.
struct VariantLabel {
  Bits bits = 0;
  int length = 0;

  static VariantLabel zeros(int m) { return {0, m}; }
  static VariantLabel parse(const std::string& text);
  std::string to_string() const { return bits_to_string(bits, length); }
};

struct RandomCircuitSpec {
  int n = 1;
  int depth = 1;
  std::uint64_t seed = 0;
};

using Matrix2 = std::array<std::complex<double>, 4>;  // row-major

/// u = e^{i xi} Z(alpha) X(beta) Z(gamma), with X(beta) = H Z(beta) H.
struct ZxzAngles {
  Angle xi;
  Angle alpha;
  Angle beta;
  Angle gamma;
};

ZxzAngles zxz_decompose(const Matrix2& u);

/// Rebuilds e^{i xi} Z(alpha) X(beta) Z(gamma).
Matrix2 zxz_compose(const ZxzAngles& angles);

/// The four J gates realising the decomposition (up to the global phase), in
/// application order: J(gamma), J(beta), J(alpha), J(0).
std::vector<Gate> zxz_to_j_gates(int wire, const ZxzAngles& angles);

Matrix2 j_matrix(double alpha);

/// Layered generator: every layer applies J(uniform angle) to each wire, then
/// CZ on the brick pairs (i, i+1) with i = layer mod 2 (step 2).
ChaoticCircuit generate_random_circuit(const RandomCircuitSpec& spec);

/// Returns U_{x'}: the flip annotation of the j-th J gate is toggled for every
/// set bit j of x'. Throws LengthMismatch when |x'| != m.
ChaoticCircuit apply_variant(const ChaoticCircuit& circuit,
                             const VariantLabel& label);

/// Mean of R_{x'} = sum_x P_qc(x|U_{x'})^2 over sampled variants; exhaustive
/// over all 2^m variants when sample_count >= 2^m.
double second_moment_ensemble_average(const ChaoticCircuit& circuit,
                                      std::uint64_t sample_count,
                                      std::uint64_t seed);

inline constexpr int kExactQubitLimit = 14;

/// Serialises to {"n":..,"gates":[{"j":{"wire":..,"angle":..}}|{"cz":[a,b]}]}
/// with 17 significant digits per angle. Flipped J gates add "flip": 1.
std::string circuit_to_json(const ChaoticCircuit& circuit);
ChaoticCircuit circuit_from_json(const std::string& text);

}  // namespace iqpnoise
