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

#include "iqpnoise/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "iqpnoise/error.hpp"
#include "iqpnoise/rng.hpp"

namespace iqpnoise {

static_assert(std::endian::native == std::endian::little,
              "binary table IO assumes a little-endian host");

namespace {

using cd = std::complex<double>;

template <typename T>
void wht_impl(std::span<T> data) {
  const std::size_t size = data.size();
  if (size == 0 || !std::has_single_bit(size)) {
    throw Error(ErrorCode::BadLength,
                fmt::format("transform length {} is not a power of two", size));
  }
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const T a = data[i];
        const T b = data[i + half];
        data[i] = a + b;
        data[i + half] = a - b;
      }
    }
  }
}

int log2_size(std::size_t size) {
  if (size == 0 || !std::has_single_bit(size)) {
    throw Error(ErrorCode::BadLength,
                fmt::format("table length {} is not a power of two", size));
  }
  return std::countr_zero(size);
}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::BadEpsilon,
                fmt::format("epsilon {} outside [0, 1]", epsilon));
  }
}

void check_label(const ChaoticCircuit& circuit, const VariantLabel& label) {
  if (label.length != circuit.m()) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("variant label has length {}, circuit has m = {}",
                            label.length, circuit.m()));
  }
}

void apply_hadamard(std::vector<cd>& amp, int wire) {
  const std::size_t bit = std::size_t{1} << wire;
  const double h = 1.0 / std::numbers::sqrt2;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (i & bit) continue;
    const cd a = amp[i];
    const cd b = amp[i | bit];
    amp[i] = h * (a + b);
    amp[i | bit] = h * (a - b);
  }
}

void damp_spectrum(std::vector<double>& coefficients, double epsilon) {
  const double keep = 1.0 - epsilon;
  const int width = log2_size(coefficients.size());
  std::vector<double> factor(static_cast<std::size_t>(width) + 1);
  for (int w = 0; w <= width; ++w) factor[w] = std::pow(keep, w);
  for (std::size_t s = 0; s < coefficients.size(); ++s) {
    coefficients[s] *= factor[weight(s)];
  }
}

std::vector<double> spectrum_values(std::vector<double> values) {
  const int width = log2_size(values.size());
  walsh_hadamard(std::span<double>(values));
  const double scale = std::ldexp(1.0, -width);
  for (double& v : values) v *= scale;
  return values;
}

void write_table(const std::string& path, std::uint32_t n, std::uint32_t m,
                 std::uint32_t kind, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  const std::uint32_t header[4] = {kTableMagic, n, m, kind};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

struct RawTable {
  std::uint32_t n = 0;
  std::uint32_t m = 0;
  std::uint32_t kind = 0;
  std::vector<double> values;
};

RawTable read_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::uint32_t header[4] = {};
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || header[0] != kTableMagic) {
    throw Error(ErrorCode::Io, path + " is not an iqpnoise table");
  }
  RawTable raw{header[1], header[2], header[3], {}};
  if (raw.n + raw.m > static_cast<std::uint32_t>(kJointTableLimit)) {
    throw Error(ErrorCode::TooLarge, path + ": table too large");
  }
  raw.values.resize(std::size_t{1} << (raw.n + raw.m));
  in.read(reinterpret_cast<char*>(raw.values.data()),
          static_cast<std::streamsize>(raw.values.size() * sizeof(double)));
  if (!in) throw Error(ErrorCode::Io, path + ": truncated table");
  return raw;
}

std::string csv_rows(const std::vector<double>& values, int width) {
  std::string out = "index,bits,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += fmt::format("{},{},{:.17g}\n", i, bits_to_string(i, width),
                       values[i]);
  }
  return out;
}

}  // namespace

void walsh_hadamard(std::span<double> data) { wht_impl(data); }
void walsh_hadamard(std::span<cd> data) { wht_impl(data); }

double ProbDist::sum() const {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

void ProbDist::validate() const {
  if (values.size() != (std::size_t{1} << bits())) {
    throw Error(ErrorCode::BadLength, "distribution length is not 2^(n+m)");
  }
  if (kind != DistKind::ExactNormalized) return;
  for (double v : values) {
    if (v < -1e-12) {
      throw Error(ErrorCode::BadRange,
                  fmt::format("negative probability {}", v));
    }
  }
  const double total = sum();
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::BadRange,
                fmt::format("probabilities sum to {:.17g}", total));
  }
}

StateVector simulate(const ChaoticCircuit& circuit, const VariantLabel& label) {
  check_label(circuit, label);
  const int n = circuit.n();
  if (n > kStateVectorLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("state vector limited to n <= {}",
                            kStateVectorLimit));
  }
  const std::size_t size = std::size_t{1} << n;
  StateVector state{n, std::vector<cd>(size, cd{std::pow(2.0, -0.5 * n)})};
  auto& amp = state.amplitudes;
  int j_index = 0;
  for (const Gate& gate : circuit.gates()) {
    if (const auto* j = std::get_if<JGate>(&gate)) {
      const std::size_t bit = std::size_t{1} << j->wire;
      const cd rotation = std::polar(1.0, j->angle.radians());
      for (std::size_t i = 0; i < size; ++i) {
        if (i & bit) amp[i] *= rotation;
      }
      apply_hadamard(amp, j->wire);
      if (j->flip != test_bit(label.bits, j_index)) {
        for (std::size_t i = 0; i < size; ++i) {
          if (!(i & bit)) std::swap(amp[i], amp[i | bit]);
        }
      }
      ++j_index;
    } else {
      const auto& cz = std::get<CZGate>(gate);
      const std::size_t both =
          (std::size_t{1} << cz.wire_a) | (std::size_t{1} << cz.wire_b);
      for (std::size_t i = 0; i < size; ++i) {
        if ((i & both) == both) amp[i] = -amp[i];
      }
    }
  }
  for (int w = 0; w < n; ++w) apply_hadamard(amp, w);
  return state;
}

ProbDist statevector_probs(const ChaoticCircuit& circuit,
                           const VariantLabel& label) {
  const StateVector state = simulate(circuit, label);
  ProbDist out{circuit.n(), 0, DistKind::ExactNormalized, {}};
  out.values.reserve(state.amplitudes.size());
  for (const cd& a : state.amplitudes) out.values.push_back(std::norm(a));
  return out;
}

ProbDist full_iqp_distribution(const IqpEncoding& encoding) {
  const int width = encoding.width();
  if (width > kJointTableLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("joint table limited to n + m <= {}",
                            kJointTableLimit));
  }
  const PhaseEvaluator phase(encoding);
  std::vector<cd> table(std::size_t{1} << width);
  for (std::size_t z = 0; z < table.size(); ++z) table[z] = phase.value(z);
  walsh_hadamard(std::span<cd>(table));
  const double scale = std::ldexp(1.0, -2 * width);
  ProbDist out{encoding.n, encoding.m, DistKind::ExactNormalized, {}};
  out.values.reserve(table.size());
  for (const cd& a : table) out.values.push_back(std::norm(a) * scale);
  return out;
}

FourierTable full_spectrum(const ProbDist& dist) {
  return {dist.n, dist.m, spectrum_values(dist.values)};
}

ProbDist inverse_spectrum(const FourierTable& table, DistKind kind) {
  std::vector<double> values = table.coefficients;
  walsh_hadamard(std::span<double>(values));
  return {table.n, table.m, kind, std::move(values)};
}

ProbDist apply_spectral_noise(const ProbDist& joint, double epsilon) {
  check_epsilon(epsilon);
  FourierTable table = full_spectrum(joint);
  damp_spectrum(table.coefficients, epsilon);
  return inverse_spectrum(table, joint.kind);
}

ProbDist noisy_distribution_exact(const IqpEncoding& encoding,
                                  double epsilon) {
  check_epsilon(epsilon);
  return apply_spectral_noise(full_iqp_distribution(encoding), epsilon);
}

ProbDist conditional_slice(const ProbDist& joint, Bits xp) {
  if (joint.values.size() != (std::size_t{1} << joint.bits())) {
    throw Error(ErrorCode::BadLength, "joint table length is not 2^(n+m)");
  }
  if (joint.m < 64 && (xp >> joint.m) != 0) {
    throw Error(ErrorCode::BadRange, "x' has bits beyond m");
  }
  const double scale = std::ldexp(1.0, joint.m);
  ProbDist out{joint.n, 0, joint.kind, {}};
  out.values.resize(std::size_t{1} << joint.n);
  for (std::size_t x = 0; x < out.values.size(); ++x) {
    out.values[x] = scale * joint.values[join_bits(x, xp, joint.n)];
  }
  return out;
}

void depolarize_outcomes(std::span<double> probs, int bits, double epsilon) {
  check_epsilon(epsilon);
  if (probs.size() != (std::size_t{1} << bits)) {
    throw Error(ErrorCode::BadLength, "outcome table length is not 2^bits");
  }
  const double flip = epsilon / 2.0;
  const double keep = 1.0 - flip;
  for (int b = 0; b < bits; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      if (i & bit) continue;
      const double a = probs[i];
      const double c = probs[i | bit];
      probs[i] = keep * a + flip * c;
      probs[i | bit] = flip * a + keep * c;
    }
  }
}

ProbDist noisy_channel_distribution(const ChaoticCircuit& circuit,
                                    const VariantLabel& label, double epsilon,
                                    const ChannelOptions& options) {
  check_epsilon(epsilon);
  check_label(circuit, label);
  const int n = circuit.n();
  const int m = circuit.m();
  const double flip = epsilon / 2.0;
  ProbDist out{n, 0, DistKind::ExactNormalized,
               std::vector<double>(std::size_t{1} << n, 0.0)};
  auto accumulate = [&](Bits pattern, double w) {
    const ProbDist branch =
        statevector_probs(circuit, VariantLabel{label.bits ^ pattern, m});
    for (std::size_t x = 0; x < out.values.size(); ++x) {
      out.values[x] += w * branch.values[x];
    }
  };
  if (options.trajectories == 0) {
    if (n > 10 || m > 16) {
      throw Error(ErrorCode::TooLarge,
                  "exact channel mixture limited to n <= 10, m <= 16");
    }
    const std::uint64_t patterns = std::uint64_t{1} << m;
    for (std::uint64_t e = 0; e < patterns; ++e) {
      const int k = weight(e);
      const double w = std::pow(flip, k) * std::pow(1.0 - flip, m - k);
      if (w == 0.0) continue;
      accumulate(e, w);
    }
  } else {
    Philox rng = make_stream(options.seed, StreamDomain::Trajectory, 0);
    const double w = 1.0 / static_cast<double>(options.trajectories);
    for (std::uint64_t t = 0; t < options.trajectories; ++t) {
      Bits e = 0;
      for (int j = 0; j < m; ++j) {
        if (rng.uniform() < flip) e |= Bits{1} << j;
      }
      accumulate(e, w);
    }
  }
  depolarize_outcomes(out.values, n, epsilon);
  return out;
}

PorterThomasReport porter_thomas_report(const ProbDist& dist) {
  const double size = static_cast<double>(dist.values.size());
  PorterThomasReport report;
  double sums[5] = {};
  for (double p : dist.values) {
    const double p2 = p * p;
    sums[2] += p2;
    sums[3] += p2 * p;
    sums[4] += p2 * p2;
  }
  report.second_moment = sums[2];
  double factorial = 1.0;
  for (int k = 2; k <= 4; ++k) {
    factorial *= k;
    report.moment_ratios.push_back(sums[k] * std::pow(size, k - 1) /
                                   factorial);
  }
  return report;
}

void write_binary(const std::string& path, const ProbDist& dist) {
  write_table(path, static_cast<std::uint32_t>(dist.n),
              static_cast<std::uint32_t>(dist.m),
              static_cast<std::uint32_t>(dist.kind), dist.values);
}

void write_binary(const std::string& path, const FourierTable& table) {
  write_table(path, static_cast<std::uint32_t>(table.n),
              static_cast<std::uint32_t>(table.m), kFourierKind,
              table.coefficients);
}

ProbDist read_binary_dist(const std::string& path) {
  RawTable raw = read_table(path);
  if (raw.kind > static_cast<std::uint32_t>(DistKind::SignedPseudo)) {
    throw Error(ErrorCode::Io, path + " does not hold a distribution");
  }
  return {static_cast<int>(raw.n), static_cast<int>(raw.m),
          static_cast<DistKind>(raw.kind), std::move(raw.values)};
}

FourierTable read_binary_table(const std::string& path) {
  RawTable raw = read_table(path);
  if (raw.kind != kFourierKind) {
    throw Error(ErrorCode::Io, path + " does not hold a Fourier table");
  }
  return {static_cast<int>(raw.n), static_cast<int>(raw.m),
          std::move(raw.values)};
}

std::string to_csv(const ProbDist& dist) {
  return csv_rows(dist.values, dist.bits());
}

std::string to_csv(const FourierTable& table) {
  return csv_rows(table.coefficients, table.n + table.m);
}

}  // namespace iqpnoise
