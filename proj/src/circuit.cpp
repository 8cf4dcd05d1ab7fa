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

#include "iqpnoise/circuit.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iqpnoise/error.hpp"
#include "iqpnoise/oracle.hpp"
#include "iqpnoise/rng.hpp"

namespace iqpnoise {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDiagonalTolerance = 1e-12;
constexpr double kUnitaryTolerance = 1e-8;

using cd = std::complex<double>;

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Matrix2 z_matrix(double alpha) {
  return {cd{1.0}, cd{0.0}, cd{0.0}, std::polar(1.0, alpha)};
}

Matrix2 hadamard() {
  const double h = 1.0 / std::numbers::sqrt2;
  return {cd{h}, cd{h}, cd{h}, cd{-h}};
}

void check_wire(int wire, int n) {
  if (wire < 0 || wire >= n) {
    throw Error(ErrorCode::BadRange, fmt::format("wire {} outside [0, {})",
                                                 wire, n));
  }
}

}  // namespace

Angle::Angle(double radians) {
  if (!std::isfinite(radians)) {
    throw Error(ErrorCode::BadRange, "angle must be finite");
  }
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  radians_ = r;
}

ChaoticCircuit::ChaoticCircuit(int n, std::vector<Gate> gates)
    : n_(n), gates_(std::move(gates)) {
  if (n < 1) throw Error(ErrorCode::BadRange, "circuit needs n >= 1");
  for (const Gate& gate : gates_) {
    if (const auto* j = std::get_if<JGate>(&gate)) {
      check_wire(j->wire, n_);
      ++m_;
    } else {
      const auto& cz = std::get<CZGate>(gate);
      check_wire(cz.wire_a, n_);
      check_wire(cz.wire_b, n_);
      if (cz.wire_a == cz.wire_b) {
        throw Error(ErrorCode::BadRange, "CZ needs two distinct wires");
      }
    }
  }
}

VariantLabel VariantLabel::parse(const std::string& text) {
  const int length = static_cast<int>(text.size());
  return {bits_from_string(text, length), length};
}

Matrix2 j_matrix(double alpha) { return multiply(hadamard(), z_matrix(alpha)); }

ZxzAngles zxz_decompose(const Matrix2& u) {
  // u^dagger u - I
  double deviation = 0.0;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      cd entry = std::conj(u[r]) * u[c] + std::conj(u[2 + r]) * u[2 + c];
      if (r == c) entry -= 1.0;
      deviation = std::max(deviation, std::abs(entry));
    }
  }
  if (!(deviation <= kUnitaryTolerance)) {
    throw Error(ErrorCode::NonUnitaryInput,
                fmt::format("|u^dagger u - I| = {:.3e}", deviation));
  }

  // e^{i xi} Z(a) X(b) Z(g) =
  //   e^{i(xi + b/2)} [[c, -i s e^{ig}], [-i s e^{ia}, c e^{i(a+g)}]]
  // with c = cos(b/2), s = sin(b/2).
  const double c = std::abs(u[0]);
  const double s = std::abs(u[2]);
  const double half_pi = std::numbers::pi / 2.0;
  double phase, alpha, beta, gamma;
  if (s <= kDiagonalTolerance) {
    beta = 0.0;
    gamma = 0.0;
    phase = std::arg(u[0]);
    alpha = std::arg(u[3]) - phase;
  } else if (c <= kDiagonalTolerance) {
    beta = std::numbers::pi;
    gamma = 0.0;
    phase = std::arg(u[1]) + half_pi;
    alpha = std::arg(u[2]) - phase + half_pi;
  } else {
    beta = 2.0 * std::atan2(s, c);
    phase = std::arg(u[0]);
    gamma = std::arg(u[1]) - phase + half_pi;
    alpha = std::arg(u[2]) - phase + half_pi;
  }
  return {Angle(phase - beta / 2.0), Angle(alpha), Angle(beta), Angle(gamma)};
}

Matrix2 zxz_compose(const ZxzAngles& a) {
  const Matrix2 x_beta =
      multiply(hadamard(), multiply(z_matrix(a.beta.radians()), hadamard()));
  Matrix2 out = multiply(z_matrix(a.alpha.radians()),
                         multiply(x_beta, z_matrix(a.gamma.radians())));
  const cd global = std::polar(1.0, a.xi.radians());
  for (cd& entry : out) entry *= global;
  return out;
}

std::vector<Gate> zxz_to_j_gates(int wire, const ZxzAngles& angles) {
  return {JGate{wire, angles.gamma}, JGate{wire, angles.beta},
          JGate{wire, angles.alpha}, JGate{wire, Angle(0.0)}};
}

ChaoticCircuit generate_random_circuit(const RandomCircuitSpec& spec) {
  if (spec.depth < 1) throw Error(ErrorCode::BadRange, "depth must be >= 1");
  if (spec.n < 1) throw Error(ErrorCode::BadRange, "n must be >= 1");
  Philox rng = make_stream(spec.seed, StreamDomain::CircuitAngles, 0);
  std::vector<Gate> gates;
  gates.reserve(static_cast<std::size_t>(spec.depth) *
                (static_cast<std::size_t>(spec.n) * 3 / 2 + 1));
  for (int layer = 0; layer < spec.depth; ++layer) {
    for (int wire = 0; wire < spec.n; ++wire) {
      gates.emplace_back(JGate{wire, Angle(kTwoPi * rng.uniform())});
    }
    for (int wire = layer % 2; wire + 1 < spec.n; wire += 2) {
      gates.emplace_back(CZGate{wire, wire + 1});
    }
  }
  return ChaoticCircuit(spec.n, std::move(gates));
}

ChaoticCircuit apply_variant(const ChaoticCircuit& circuit,
                             const VariantLabel& label) {
  if (label.length != circuit.m()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("variant label has length {}, circuit has m = {}",
                            label.length, circuit.m()));
  }
  std::vector<Gate> gates = circuit.gates();
  int j_index = 0;
  for (Gate& gate : gates) {
    if (auto* j = std::get_if<JGate>(&gate)) {
      if (test_bit(label.bits, j_index)) j->flip = !j->flip;
      ++j_index;
    }
  }
  return ChaoticCircuit(circuit.n(), std::move(gates));
}

double second_moment_ensemble_average(const ChaoticCircuit& circuit,
                                      std::uint64_t sample_count,
                                      std::uint64_t seed) {
  if (sample_count < 1) {
    throw Error(ErrorCode::BadRange, "sample_count must be >= 1");
  }
  if (circuit.n() > kExactQubitLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("exact second moment limited to n <= {}",
                            kExactQubitLimit));
  }
  const int m = circuit.m();
  auto second_moment = [&](Bits xp) {
    const ProbDist p = statevector_probs(circuit, VariantLabel{xp, m});
    double r = 0.0;
    for (double v : p.values) r += v * v;
    return r;
  };
  const bool exhaustive =
      m < 63 && sample_count >= (std::uint64_t{1} << m);
  double total = 0.0;
  if (exhaustive) {
    const std::uint64_t variants = std::uint64_t{1} << m;
    for (std::uint64_t xp = 0; xp < variants; ++xp) total += second_moment(xp);
    return total / static_cast<double>(variants);
  }
  Philox rng = make_stream(seed, StreamDomain::VariantChoice, 0);
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    total += second_moment(rng.next_u64() & low_mask(m));
  }
  return total / static_cast<double>(sample_count);
}

std::string circuit_to_json(const ChaoticCircuit& circuit) {
  std::string out = fmt::format("{{\"n\": {}, \"gates\": [", circuit.n());
  bool first = true;
  for (const Gate& gate : circuit.gates()) {
    if (!first) out += ", ";
    first = false;
    if (const auto* j = std::get_if<JGate>(&gate)) {
      out += fmt::format("{{\"j\": {{\"wire\": {}, \"angle\": {:.17g}", j->wire,
                         j->angle.radians());
      out += j->flip ? ", \"flip\": 1}}" : "}}";
    } else {
      const auto& cz = std::get<CZGate>(gate);
      out += fmt::format("{{\"cz\": [{}, {}]}}", cz.wire_a, cz.wire_b);
    }
  }
  out += "]}";
  return out;
}

ChaoticCircuit circuit_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
    const int n = doc.at("n").get<int>();
    std::vector<Gate> gates;
    for (const auto& entry : doc.at("gates")) {
      if (entry.contains("j")) {
        const auto& j = entry.at("j");
        gates.emplace_back(JGate{j.at("wire").get<int>(),
                                 Angle(j.at("angle").get<double>()),
                                 j.value("flip", 0) != 0});
      } else if (entry.contains("cz")) {
        const auto& cz = entry.at("cz");
        if (!cz.is_array() || cz.size() != 2) {
          throw Error(ErrorCode::Config, "cz entry needs two wires");
        }
        gates.emplace_back(CZGate{cz[0].get<int>(), cz[1].get<int>()});
      } else {
        throw Error(ErrorCode::Config, "gate must be a 'j' or 'cz' object");
      }
    }
    return ChaoticCircuit(n, std::move(gates));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("circuit JSON: ") + e.what());
  }
}

}  // namespace iqpnoise
