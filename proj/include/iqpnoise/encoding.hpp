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

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "iqpnoise/bits.hpp"
#include "iqpnoise/circuit.hpp"

namespace iqpnoise {

struct LinearTerm {
  int wire = 0;
  Angle angle;

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// Diagonal phase polynomial over physical wires: each linear term adds
/// angle * z_wire, each quadratic pair adds pi * z_a * z_b.
struct PhasePolynomial {
  std::vector<LinearTerm> linear;
  std::vector<std::pair<int, int>> quadratic;

  friend bool operator==(const PhasePolynomial&, const PhasePolynomial&) =
      default;
};

/// IQP form H^(n+m) D H^(n+m) of a chaotic circuit, with the wire threading
/// produced by one J-teleportation gadget per J gate.
///
/// Physical wires are numbered in allocation order: 0..n-1 are the initial
/// wires of the logical qubits, then one fresh wire per J gate in gate order.
/// Every table of size 2^(n+m) in the library uses the *joint* layout
/// instead: bit i < n is logical qubit i's output wire, bit n + j is the j-th
/// measured ancilla. `joint_position` maps one to the other.
struct IqpEncoding {
  int n = 0;
  int m = 0;
  PhasePolynomial poly;
  std::vector<std::vector<int>> thread_map;
  std::vector<int> output_wires;
  std::vector<int> ancilla_order;

  int width() const noexcept { return n + m; }

  /// joint bit position of every physical wire
  std::vector<int> joint_positions() const;

  Bits physical_to_joint(Bits z) const;
  Bits joint_to_physical(Bits joint) const;

  friend bool operator==(const IqpEncoding&, const IqpEncoding&) = default;
};

IqpEncoding encode(const ChaoticCircuit& circuit);

/// f(z) = <z|D|z> for z over physical wires (bit w is wire w).
std::complex<double> eval_f(const IqpEncoding& encoding, Bits z);

/// Variant taking z as "0"/"1" text, one character per physical wire.
std::complex<double> eval_f(const IqpEncoding& encoding, std::string_view z);

/// Fast evaluator of the phase arg f(z) for z in the joint layout: the
/// per-position angle sums and upper-triangular adjacency masks are
/// precomputed so a call costs O(n + m).
class PhaseEvaluator {
 public:
  explicit PhaseEvaluator(const IqpEncoding& encoding);

  int width() const noexcept { return width_; }

  /// Phase theta with f = e^{i theta}; the quadratic part contributes pi per
  /// odd pair count. Not reduced modulo 2 pi.
  double phase(Bits joint) const noexcept;

  std::complex<double> value(Bits joint) const noexcept {
    return std::polar(1.0, phase(joint));
  }

 private:
  int width_;
  std::vector<double> angle_;
  std::vector<Bits> upper_adjacency_;
};

std::string encoding_to_json(const IqpEncoding& encoding);
IqpEncoding encoding_from_json(const std::string& text);

}  // namespace iqpnoise
