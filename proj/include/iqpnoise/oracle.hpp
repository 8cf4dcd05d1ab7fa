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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iqpnoise/bits.hpp"
#include "iqpnoise/circuit.hpp"
#include "iqpnoise/encoding.hpp"

namespace iqpnoise {

/// In-place unnormalised Walsh-Hadamard transform:
/// out[s] = sum_z in[z] (-1)^{s.z}. Length must be a power of two.
void walsh_hadamard(std::span<double> data);
void walsh_hadamard(std::span<std::complex<double>> data);

struct StateVector {
  int qubits = 0;
  std::vector<std::complex<double>> amplitudes;
};

enum class DistKind : std::uint32_t {
  ExactNormalized = 0,
  SignedPseudo = 1,
};

/// Length-2^bits table. For joint tables n and m record the split, with x in
/// the low n bits.
struct ProbDist {
  int n = 0;
  int m = 0;
  DistKind kind = DistKind::ExactNormalized;
  std::vector<double> values;

  int bits() const noexcept { return n + m; }
  double sum() const;
  /// Throws BadRange when an exact-normalized table is negative beyond
  /// 1e-12 or its sum misses 1 by more than 1e-9.
  void validate() const;
};

struct FourierTable {
  int n = 0;
  int m = 0;
  std::vector<double> coefficients;
};

inline constexpr int kStateVectorLimit = 20;
inline constexpr int kJointTableLimit = 24;

/// Final state H^n U_{x'} |+>^n, the readout the IQP output layer realises.
StateVector simulate(const ChaoticCircuit& circuit, const VariantLabel& label);

/// P_qc(x|U_{x'}) over 2^n outcomes.
ProbDist statevector_probs(const ChaoticCircuit& circuit,
                           const VariantLabel& label);

/// Joint P_IQP over 2^(n+m) via WHT of the f table.
ProbDist full_iqp_distribution(const IqpEncoding& encoding);

/// Coefficients 2^{-(n+m)} sum_z P(z) (-1)^{s.z}.
FourierTable full_spectrum(const ProbDist& dist);

/// Inverse of full_spectrum.
ProbDist inverse_spectrum(const FourierTable& table,
                          DistKind kind = DistKind::ExactNormalized);

/// Joint noisy IQP distribution: every coefficient damped by
/// (1-eps)^{|ss'|}.
ProbDist noisy_distribution_exact(const IqpEncoding& encoding, double epsilon);

/// Same damping applied to an already computed joint distribution.
ProbDist apply_spectral_noise(const ProbDist& joint, double epsilon);

/// 2^m * joint(x, x') as a 2^n distribution.
ProbDist conditional_slice(const ProbDist& joint, Bits xp);

struct ChannelOptions {
  /// 0 enumerates every bit-flip pattern exactly; otherwise that many
  /// patterns are drawn (trajectory mode).
  std::uint64_t trajectories = 0;
  std::uint64_t seed = 0;
};

/// P_exp(x|U_{x'}): bit-flip channel after each J gate, then depolarizing on
/// each system qubit before readout, one shared epsilon.
ProbDist noisy_channel_distribution(const ChaoticCircuit& circuit,
                                    const VariantLabel& label, double epsilon,
                                    const ChannelOptions& options = {});

/// Flips each bit independently with probability eps/2 (the measured effect
/// of depolarizing every qubit before readout).
void depolarize_outcomes(std::span<double> probs, int bits, double epsilon);

struct PorterThomasReport {
  double second_moment = 0.0;
  /// k = 2, 3, 4: (sum_x P^k) N^{k-1} / k!
  std::vector<double> moment_ratios;
};

PorterThomasReport porter_thomas_report(const ProbDist& dist);

// Binary export: 16-byte header {magic, n, m, kind} (little-endian u32s)
// followed by little-endian float64 values.
inline constexpr std::uint32_t kTableMagic = 0x44505149;  // "IQPD"
inline constexpr std::uint32_t kFourierKind = 2;

void write_binary(const std::string& path, const ProbDist& dist);
void write_binary(const std::string& path, const FourierTable& table);
ProbDist read_binary_dist(const std::string& path);
FourierTable read_binary_table(const std::string& path);

/// CSV with one row per index: index,bits,value
std::string to_csv(const ProbDist& dist);
std::string to_csv(const FourierTable& table);

}  // namespace iqpnoise
