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

#include "iqpnoise/encoding.hpp"

#include <numbers>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iqpnoise/error.hpp"

namespace iqpnoise {

IqpEncoding encode(const ChaoticCircuit& circuit) {
  IqpEncoding out;
  out.n = circuit.n();
  out.m = circuit.m();
  if (out.width() > kMaxBits) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("n + m = {} exceeds {} wires", out.width(),
                            kMaxBits));
  }
  std::vector<int> current(static_cast<std::size_t>(out.n));
  out.thread_map.resize(static_cast<std::size_t>(out.n));
  for (int q = 0; q < out.n; ++q) {
    current[q] = q;
    out.thread_map[q].push_back(q);
  }
  int next_wire = out.n;
  out.poly.linear.reserve(static_cast<std::size_t>(out.m));
  out.ancilla_order.reserve(static_cast<std::size_t>(out.m));
  for (const Gate& gate : circuit.gates()) {
    if (const auto* j = std::get_if<JGate>(&gate)) {
      const int p = current[j->wire];
      const int fresh = next_wire++;
      out.poly.quadratic.emplace_back(p, fresh);
      // A Pauli-X after the gate relabels the ancilla outcome, i.e. adds pi.
      const double angle =
          j->angle.radians() + (j->flip ? std::numbers::pi : 0.0);
      out.poly.linear.push_back({p, Angle(angle)});
      out.ancilla_order.push_back(p);
      current[j->wire] = fresh;
      out.thread_map[j->wire].push_back(fresh);
    } else {
      const auto& cz = std::get<CZGate>(gate);
      out.poly.quadratic.emplace_back(current[cz.wire_a], current[cz.wire_b]);
    }
  }
  out.output_wires = std::move(current);
  return out;
}

std::vector<int> IqpEncoding::joint_positions() const {
  std::vector<int> pos(static_cast<std::size_t>(width()), -1);
  for (int q = 0; q < n; ++q) pos[output_wires[q]] = q;
  for (int j = 0; j < m; ++j) pos[ancilla_order[j]] = n + j;
  return pos;
}

Bits IqpEncoding::physical_to_joint(Bits z) const {
  Bits out = 0;
  for (int q = 0; q < n; ++q) {
    if (test_bit(z, output_wires[q])) out |= Bits{1} << q;
  }
  for (int j = 0; j < m; ++j) {
    if (test_bit(z, ancilla_order[j])) out |= Bits{1} << (n + j);
  }
  return out;
}

Bits IqpEncoding::joint_to_physical(Bits joint) const {
  Bits out = 0;
  for (int q = 0; q < n; ++q) {
    if (test_bit(joint, q)) out |= Bits{1} << output_wires[q];
  }
  for (int j = 0; j < m; ++j) {
    if (test_bit(joint, n + j)) out |= Bits{1} << ancilla_order[j];
  }
  return out;
}

std::complex<double> eval_f(const IqpEncoding& encoding, Bits z) {
  double phase = 0.0;
  for (const LinearTerm& term : encoding.poly.linear) {
    if (test_bit(z, term.wire)) phase += term.angle.radians();
  }
  int pairs = 0;
  for (const auto& [a, b] : encoding.poly.quadratic) {
    pairs += static_cast<int>(test_bit(z, a) && test_bit(z, b));
  }
  const std::complex<double> value = std::polar(1.0, phase);
  return (pairs & 1) ? -value : value;
}

std::complex<double> eval_f(const IqpEncoding& encoding, std::string_view z) {
  return eval_f(encoding, bits_from_string(z, encoding.width()));
}

PhaseEvaluator::PhaseEvaluator(const IqpEncoding& encoding)
    : width_(encoding.width()),
      angle_(static_cast<std::size_t>(encoding.width()), 0.0),
      upper_adjacency_(static_cast<std::size_t>(encoding.width()), 0) {
  const std::vector<int> pos = encoding.joint_positions();
  for (const LinearTerm& term : encoding.poly.linear) {
    angle_[pos[term.wire]] += term.angle.radians();
  }
  for (const auto& [a, b] : encoding.poly.quadratic) {
    const int lo = std::min(pos[a], pos[b]);
    const int hi = std::max(pos[a], pos[b]);
    upper_adjacency_[lo] ^= Bits{1} << hi;
  }
}

double PhaseEvaluator::phase(Bits joint) const noexcept {
  double theta = 0.0;
  Bits pairs = 0;
  for (Bits rest = joint; rest != 0; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    theta += angle_[i];
    pairs ^= upper_adjacency_[i] & joint;
  }
  return parity(pairs) ? theta + std::numbers::pi : theta;
}

std::string encoding_to_json(const IqpEncoding& encoding) {
  std::string out =
      fmt::format("{{\"n\": {}, \"m\": {}, \"linear\": [", encoding.n,
                  encoding.m);
  for (std::size_t i = 0; i < encoding.poly.linear.size(); ++i) {
    const LinearTerm& t = encoding.poly.linear[i];
    out += fmt::format("{}[{}, {:.17g}]", i ? ", " : "", t.wire,
                       t.angle.radians());
  }
  out += "], \"quadratic\": [";
  for (std::size_t i = 0; i < encoding.poly.quadratic.size(); ++i) {
    const auto& [a, b] = encoding.poly.quadratic[i];
    out += fmt::format("{}[{}, {}]", i ? ", " : "", a, b);
  }
  out += fmt::format("], \"output_wires\": [{}], \"ancilla_order\": [{}]",
                     fmt::join(encoding.output_wires, ", "),
                     fmt::join(encoding.ancilla_order, ", "));
  out += ", \"thread_map\": [";
  for (std::size_t q = 0; q < encoding.thread_map.size(); ++q) {
    out += fmt::format("{}[{}]", q ? ", " : "",
                       fmt::join(encoding.thread_map[q], ", "));
  }
  out += "]}";
  return out;
}

IqpEncoding encoding_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    IqpEncoding out;
    out.n = doc.at("n").get<int>();
    out.m = doc.at("m").get<int>();
    if (out.n < 1 || out.m < 0 || out.width() > kMaxBits) {
      throw Error(ErrorCode::BadRange, "encoding dimensions out of range");
    }
    auto check = [&](int wire) {
      if (wire < 0 || wire >= out.width()) {
        throw Error(ErrorCode::BadRange,
                    fmt::format("wire {} outside [0, {})", wire, out.width()));
      }
      return wire;
    };
    for (const auto& entry : doc.at("linear")) {
      out.poly.linear.push_back(
          {check(entry.at(0).get<int>()), Angle(entry.at(1).get<double>())});
    }
    for (const auto& entry : doc.at("quadratic")) {
      const int a = check(entry.at(0).get<int>());
      const int b = check(entry.at(1).get<int>());
      if (a == b) throw Error(ErrorCode::BadRange, "quadratic pair a == b");
      out.poly.quadratic.emplace_back(a, b);
    }
    out.output_wires = doc.at("output_wires").get<std::vector<int>>();
    out.ancilla_order = doc.at("ancilla_order").get<std::vector<int>>();
    if (doc.contains("thread_map")) {
      out.thread_map =
          doc.at("thread_map").get<std::vector<std::vector<int>>>();
    }
    if (static_cast<int>(out.output_wires.size()) != out.n ||
        static_cast<int>(out.ancilla_order.size()) != out.m) {
      throw Error(ErrorCode::LengthMismatch,
                  "output_wires / ancilla_order lengths must be n / m");
    }
    Bits seen = 0;
    for (int w : out.output_wires) seen |= Bits{1} << check(w);
    for (int w : out.ancilla_order) seen |= Bits{1} << check(w);
    if (seen != low_mask(out.width())) {
      throw Error(ErrorCode::BadRange,
                  "output and ancilla wires must partition all wires");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("encoding JSON: ") + e.what());
  }
}

}  // namespace iqpnoise
