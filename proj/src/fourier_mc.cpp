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

#include "iqpnoise/fourier_mc.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iqpnoise/error.hpp"
#include "iqpnoise/parallel.hpp"
#include "iqpnoise/rng.hpp"

namespace iqpnoise {

namespace {

constexpr std::uint32_t kSpectrumMagic = 0x53505149;  // "IQPS"
constexpr int kPhaseTableLimit = 20;

std::string_view mode_name(EstimatorMode mode) {
  return mode == EstimatorMode::Exhaustive ? "exhaustive" : "sampled";
}

EstimatorMode parse_mode(const std::string& text) {
  if (text == "sampled") return EstimatorMode::Sampled;
  if (text == "exhaustive") return EstimatorMode::Exhaustive;
  throw Error(ErrorCode::Config, "unknown estimator mode '" + text + "'");
}

// f values over the joint layout, either tabulated or evaluated on demand.
class PhaseSource {
 public:
  PhaseSource(const IqpEncoding& encoding, bool tabulate)
      : evaluator_(encoding), width_(encoding.width()) {
    if (tabulate && width_ <= kPhaseTableLimit) {
      table_.emplace(std::size_t{1} << width_);
      for (std::size_t z = 0; z < table_->size(); ++z) {
        (*table_)[z] = evaluator_.value(z);
      }
    }
  }

  int width() const noexcept { return width_; }

  double overlap(Bits y, Bits shift) const noexcept {
    if (table_) {
      const auto& a = (*table_)[y];
      const auto& b = (*table_)[y ^ shift];
      return a.real() * b.real() + a.imag() * b.imag();
    }
    return std::cos(evaluator_.phase(y ^ shift) - evaluator_.phase(y));
  }

  double sampled(Bits shift, std::uint64_t trials, Philox rng) const {
    const Bits mask = low_mask(width_);
    double total = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      total += overlap(rng.next_u64() & mask, shift);
    }
    return std::ldexp(total / static_cast<double>(trials), -width_);
  }

  double exhaustive(Bits shift) const {
    if (width_ > kJointTableLimit) {
      throw Error(ErrorCode::TooLarge,
                  fmt::format("exhaustive estimate limited to n + m <= {}",
                              kJointTableLimit));
    }
    const std::uint64_t size = std::uint64_t{1} << width_;
    double total = 0.0;
    for (std::uint64_t y = 0; y < size; ++y) total += overlap(y, shift);
    return std::ldexp(total, -2 * width_);
  }

 private:
  PhaseEvaluator evaluator_;
  int width_;
  std::optional<std::vector<std::complex<double>>> table_;
};

Bits shift_of(const IqpEncoding& encoding, Bits s, Bits sp) {
  if ((s >> encoding.n) != 0 ||
      (encoding.m < 64 && (sp >> encoding.m) != 0)) {
    throw Error(ErrorCode::LengthMismatch, "shift has bits beyond n or m");
  }
  return join_bits(s, sp, encoding.n);
}

std::vector<double> damping_factors(double epsilon, int width) {
  std::vector<double> out(static_cast<std::size_t>(width) + 1);
  for (int w = 0; w <= width; ++w) out[w] = std::pow(1.0 - epsilon, w);
  return out;
}

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T take(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  return value;
}

}  // namespace

void TruncationParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::BadRange, fmt::format("delta {} outside (0, 1)",
                                                 delta));
  }
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(ErrorCode::BadEpsilon,
                fmt::format("epsilon {} outside [0, 1]", epsilon));
  }
  if (!(alpha_chaos >= 0.0) || !std::isfinite(alpha_chaos)) {
    throw Error(ErrorCode::BadRange, "alpha_chaos must be finite and >= 0");
  }
  if (L < 0) throw Error(ErrorCode::BadRange, "L must be >= 0");
  if (t_run < 1) throw Error(ErrorCode::BadRange, "t_run must be >= 1");
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw Error(ErrorCode::BadRange, "eta must be finite and > 0");
  }
}

std::uint64_t hoeffding_trials(double eta, double safety, double failure) {
  if (!(eta > 0.0) || !(safety >= 1.0) || !(failure > 0.0 && failure < 1.0)) {
    throw Error(ErrorCode::BadRange,
                "hoeffding_trials needs eta > 0, safety >= 1, 0 < failure < 1");
  }
  const double trials =
      std::ceil(safety * std::log(2.0 / failure) / (2.0 * eta * eta));
  if (!(trials < 0x1.0p63)) {
    throw Error(ErrorCode::Overflow,
                fmt::format("trial count {:.3e} exceeds 2^63", trials));
  }
  return static_cast<std::uint64_t>(trials);
}

int truncation_order(double delta, double epsilon, double alpha_chaos) {
  const double ratio = alpha_chaos / (delta * delta);
  if (ratio <= 1.0) return 0;
  const double L = std::ceil(std::log(ratio) / (2.0 * epsilon));
  if (!(L < 1e9)) throw Error(ErrorCode::BadRange, "truncation order diverges");
  return static_cast<int>(L);
}

double coefficient_accuracy(double delta, int width, int L) {
  return delta / std::sqrt(std::pow(static_cast<double>(width), L) + 1.0);
}

TruncationParams choose_params(double delta, double epsilon,
                               double alpha_chaos, int n, int m, double safety,
                               std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0) || !(epsilon > 0.0 && epsilon <= 1.0) ||
      !(alpha_chaos > 0.0) || n < 1 || m < 0 || !(safety >= 1.0)) {
    throw Error(ErrorCode::BadRange,
                "choose_params needs 0 < delta < 1, 0 < epsilon <= 1, "
                "alpha_chaos > 0, n >= 1, m >= 0, safety >= 1");
  }
  TruncationParams p;
  p.delta = delta;
  p.epsilon = epsilon;
  p.alpha_chaos = alpha_chaos;
  p.seed = seed;
  p.L = truncation_order(delta, epsilon, alpha_chaos);
  p.eta = coefficient_accuracy(delta, n + m, p.L);
  p.t_run = hoeffding_trials(p.eta, safety);
  return p;
}

std::uint64_t truncated_entry_count(int width, int L) {
  if (width < 0 || L < 0) throw Error(ErrorCode::BadRange, "negative size");
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (int k = 0; k <= std::min(L, width); ++k) {
    if (k > 0) {
      // C(width, k) = C(width, k-1) * (width-k+1) / k, reduced by gcd first
      const std::uint64_t g = std::gcd(binom, static_cast<std::uint64_t>(k));
      const std::uint64_t factor =
          static_cast<std::uint64_t>(width - k + 1) / (k / g);
      if (binom / g > std::numeric_limits<std::uint64_t>::max() / factor) {
        throw Error(ErrorCode::Overflow, "entry count exceeds 2^64");
      }
      binom = binom / g * factor;
    }
    if (total > std::numeric_limits<std::uint64_t>::max() - binom) {
      throw Error(ErrorCode::Overflow, "entry count exceeds 2^64");
    }
    total += binom;
  }
  return total;
}

std::vector<Bits> canonical_masks(int width, int L) {
  if (width < 0 || width > kMaxBits) {
    throw Error(ErrorCode::TooLarge, "mask width must be in [0, 64]");
  }
  std::vector<Bits> out;
  out.reserve(truncated_entry_count(width, L));
  out.push_back(0);
  for (int k = 1; k <= std::min(L, width); ++k) {
    const Bits last = low_mask(k) << (width - k);
    Bits v = low_mask(k);
    while (true) {
      out.push_back(v);
      if (v == last) break;
      const Bits t = v | (v - 1);
      v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
  }
  return out;
}

double estimate_coefficient(const IqpEncoding& encoding, Bits s, Bits sp,
                            std::uint64_t trials, std::uint64_t stream_seed,
                            std::uint64_t stream_index) {
  if (trials < 1) throw Error(ErrorCode::BadRange, "trials must be >= 1");
  const Bits shift = shift_of(encoding, s, sp);
  const bool tabulate =
      static_cast<double>(trials) >= std::ldexp(1.0, encoding.width());
  const PhaseSource source(encoding, tabulate);
  return source.sampled(
      shift, trials,
      make_stream(stream_seed, StreamDomain::Coefficient, stream_index));
}

double exact_coefficient(const IqpEncoding& encoding, Bits s, Bits sp) {
  const Bits shift = shift_of(encoding, s, sp);
  return PhaseSource(encoding, true).exhaustive(shift);
}

TruncatedSpectrum::TruncatedSpectrum(int n, int m, TruncationParams params,
                                     std::vector<Bits> masks,
                                     std::vector<double> values)
    : n_(n),
      m_(m),
      params_(params),
      masks_(std::move(masks)),
      values_(std::move(values)) {
  if (n < 1 || m < 0 || n + m > kMaxBits) {
    throw Error(ErrorCode::BadRange, "spectrum dimensions out of range");
  }
  if (masks_.size() != values_.size()) {
    throw Error(ErrorCode::LengthMismatch, "mask and value counts differ");
  }
  index_.reserve(masks_.size());
  const Bits outside = ~low_mask(n + m);
  for (std::size_t i = 0; i < masks_.size(); ++i) {
    if (weight(masks_[i]) > params_.L || (masks_[i] & outside) != 0) {
      throw Error(ErrorCode::BadRange,
                  fmt::format("mask {} outside the truncation", masks_[i]));
    }
    index_.emplace(masks_[i], i);
  }
}

double TruncatedSpectrum::at(Bits mask) const {
  const auto it = index_.find(mask);
  return it == index_.end() ? 0.0 : values_[it->second];
}

TruncatedSpectrum build_truncated_spectrum(const IqpEncoding& encoding,
                                           const TruncationParams& params,
                                           const BuildOptions& options) {
  params.validate();
  const int width = encoding.width();
  const std::uint64_t count = truncated_entry_count(width, params.L);
  if (count > options.entry_budget) {
    throw Error(ErrorCode::Overflow,
                fmt::format("{} coefficients exceed the budget of {}", count,
                            options.entry_budget));
  }
  std::vector<Bits> masks = canonical_masks(width, params.L);
  std::vector<double> values(masks.size());
  const std::vector<double> damping = damping_factors(params.epsilon, width);
  if (params.mode == EstimatorMode::Exhaustive) {
    if (width > kJointTableLimit) {
      throw Error(ErrorCode::TooLarge,
                  fmt::format("exhaustive estimates limited to n + m <= {}",
                              kJointTableLimit));
    }
    const FourierTable exact = full_spectrum(full_iqp_distribution(encoding));
    for (std::size_t i = 0; i < masks.size(); ++i) {
      values[i] = damping[weight(masks[i])] * exact.coefficients[masks[i]];
    }
  } else {
    const bool tabulate = static_cast<double>(params.t_run) * masks.size() >
                          std::ldexp(1.0, width);
    const PhaseSource source(encoding, tabulate);
    parallel_for(masks.size(), options.workers, [&](std::size_t i) {
      values[i] = damping[weight(masks[i])] *
                  source.sampled(masks[i], params.t_run,
                                 make_stream(params.seed,
                                             StreamDomain::Coefficient, i));
    });
  }
  return TruncatedSpectrum(encoding.n, encoding.m, params, std::move(masks),
                           std::move(values));
}

TruncatedSpectrum truncate_spectrum(const FourierTable& table,
                                    const TruncationParams& params) {
  params.validate();
  const int width = table.n + table.m;
  if (table.coefficients.size() != (std::size_t{1} << width)) {
    throw Error(ErrorCode::BadLength, "table length is not 2^(n+m)");
  }
  std::vector<Bits> masks = canonical_masks(width, params.L);
  std::vector<double> values(masks.size());
  const std::vector<double> damping = damping_factors(params.epsilon, width);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    values[i] = damping[weight(masks[i])] * table.coefficients[masks[i]];
  }
  return TruncatedSpectrum(table.n, table.m, params, std::move(masks),
                           std::move(values));
}

double p_cl_joint(const TruncatedSpectrum& spectrum, Bits x, Bits xp) {
  const Bits z = join_bits(x, xp, spectrum.n());
  const auto& masks = spectrum.masks();
  const auto& values = spectrum.values();
  double total = 0.0;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    total += parity(masks[i] & z) ? -values[i] : values[i];
  }
  return total;
}

double p_cl_conditional(const TruncatedSpectrum& spectrum, Bits x, Bits xp) {
  return std::ldexp(p_cl_joint(spectrum, x, xp), spectrum.m());
}

ProbDist p_cl_dense(const TruncatedSpectrum& spectrum) {
  const int width = spectrum.width();
  if (width > kJointTableLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("dense reconstruction limited to n + m <= {}",
                            kJointTableLimit));
  }
  FourierTable table{spectrum.n(), spectrum.m(),
                     std::vector<double>(std::size_t{1} << width, 0.0)};
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    table.coefficients[spectrum.masks()[i]] = spectrum.values()[i];
  }
  return inverse_spectrum(table, DistKind::SignedPseudo);
}

OmegaSplit omega_split(const TruncatedSpectrum& spectrum,
                       const FourierTable& exact_noisy) {
  const int width = spectrum.width();
  if (exact_noisy.n != spectrum.n() || exact_noisy.m != spectrum.m() ||
      exact_noisy.coefficients.size() != (std::size_t{1} << width)) {
    throw Error(ErrorCode::LengthMismatch,
                "exact spectrum does not match the truncated spectrum");
  }
  double inside = 0.0;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const double d =
        spectrum.values()[i] - exact_noisy.coefficients[spectrum.masks()[i]];
    inside += d * d;
  }
  double outside = 0.0;
  for (std::size_t s = 0; s < exact_noisy.coefficients.size(); ++s) {
    if (weight(s) > spectrum.params().L) {
      outside += exact_noisy.coefficients[s] * exact_noisy.coefficients[s];
    }
  }
  const double scale = std::ldexp(1.0, 2 * width);
  return {scale * inside, scale * outside};
}

std::vector<double> omega2_curve(const FourierTable& exact_noisy, int max_L) {
  const int width = exact_noisy.n + exact_noisy.m;
  if (exact_noisy.coefficients.size() != (std::size_t{1} << width)) {
    throw Error(ErrorCode::BadLength, "table length is not 2^(n+m)");
  }
  if (max_L < 0) throw Error(ErrorCode::BadRange, "max_L must be >= 0");
  std::vector<double> by_weight(static_cast<std::size_t>(width) + 1, 0.0);
  for (std::size_t s = 0; s < exact_noisy.coefficients.size(); ++s) {
    by_weight[weight(s)] +=
        exact_noisy.coefficients[s] * exact_noisy.coefficients[s];
  }
  const double scale = std::ldexp(1.0, 2 * width);
  std::vector<double> curve;
  curve.reserve(static_cast<std::size_t>(max_L) + 1);
  for (int L = 0; L <= max_L; ++L) {
    double tail = 0.0;
    for (int w = L + 1; w <= width; ++w) tail += by_weight[w];
    curve.push_back(scale * tail);
  }
  return curve;
}

std::string spectrum_to_json(const TruncatedSpectrum& spectrum) {
  const TruncationParams& p = spectrum.params();
  std::string out = fmt::format(
      "{{\"n\": {}, \"m\": {}, \"delta\": {:.17g}, \"epsilon\": {:.17g}, "
      "\"alpha_chaos\": {:.17g}, \"L\": {}, \"eta\": {:.17g}, \"t_run\": {}, "
      "\"seed\": {}, \"mode\": \"{}\", \"entries\": [",
      spectrum.n(), spectrum.m(), p.delta, p.epsilon, p.alpha_chaos, p.L,
      p.eta, p.t_run, p.seed, mode_name(p.mode));
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    out += fmt::format("{}[{}, {:.17g}]", i ? ", " : "", i,
                       spectrum.values()[i]);
  }
  out += "]}";
  return out;
}

TruncatedSpectrum spectrum_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    TruncationParams p;
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    p.delta = doc.at("delta").get<double>();
    p.epsilon = doc.at("epsilon").get<double>();
    p.alpha_chaos = doc.at("alpha_chaos").get<double>();
    p.L = doc.at("L").get<int>();
    p.eta = doc.at("eta").get<double>();
    p.t_run = doc.at("t_run").get<std::uint64_t>();
    p.seed = doc.at("seed").get<std::uint64_t>();
    p.mode = parse_mode(doc.value("mode", std::string("sampled")));
    p.validate();
    if (n < 1 || m < 0 || n + m > kMaxBits) {
      throw Error(ErrorCode::BadRange, "spectrum dimensions out of range");
    }
    std::vector<Bits> masks = canonical_masks(n + m, p.L);
    std::vector<double> values(masks.size(), 0.0);
    const auto& entries = doc.at("entries");
    if (entries.size() != masks.size()) {
      throw Error(ErrorCode::LengthMismatch,
                  fmt::format("expected {} entries, found {}", masks.size(),
                              entries.size()));
    }
    for (const auto& entry : entries) {
      const std::size_t i = entry.at(0).get<std::size_t>();
      if (i >= values.size()) {
        throw Error(ErrorCode::BadRange, "entry index out of range");
      }
      values[i] = entry.at(1).get<double>();
    }
    return TruncatedSpectrum(n, m, p, std::move(masks), std::move(values));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("spectrum JSON: ") + e.what());
  }
}

void write_spectrum_binary(const std::string& path,
                           const TruncatedSpectrum& spectrum) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path);
  const TruncationParams& p = spectrum.params();
  put<std::uint32_t>(out, kSpectrumMagic);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spectrum.n()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spectrum.m()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.L));
  put<double>(out, p.delta);
  put<double>(out, p.epsilon);
  put<double>(out, p.alpha_chaos);
  put<double>(out, p.eta);
  put<std::uint64_t>(out, p.t_run);
  put<std::uint64_t>(out, p.seed);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(p.mode));
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, spectrum.size());
  out.write(reinterpret_cast<const char*>(spectrum.values().data()),
            static_cast<std::streamsize>(spectrum.size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

TruncatedSpectrum read_spectrum_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  if (take<std::uint32_t>(in) != kSpectrumMagic) {
    throw Error(ErrorCode::Io, path + " is not an iqpnoise spectrum");
  }
  const int n = static_cast<int>(take<std::uint32_t>(in));
  const int m = static_cast<int>(take<std::uint32_t>(in));
  TruncationParams p;
  p.L = static_cast<int>(take<std::uint32_t>(in));
  p.delta = take<double>(in);
  p.epsilon = take<double>(in);
  p.alpha_chaos = take<double>(in);
  p.eta = take<double>(in);
  p.t_run = take<std::uint64_t>(in);
  p.seed = take<std::uint64_t>(in);
  p.mode = static_cast<EstimatorMode>(take<std::uint32_t>(in));
  take<std::uint32_t>(in);
  const std::uint64_t count = take<std::uint64_t>(in);
  if (!in || n < 1 || m < 0 || n + m > kMaxBits) {
    throw Error(ErrorCode::Io, path + ": bad spectrum header");
  }
  p.validate();
  std::vector<Bits> masks = canonical_masks(n + m, p.L);
  if (masks.size() != count) {
    throw Error(ErrorCode::Io, path + ": entry count mismatch");
  }
  std::vector<double> values(count);
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw Error(ErrorCode::Io, path + ": truncated spectrum");
  return TruncatedSpectrum(n, m, p, std::move(masks), std::move(values));
}

}  // namespace iqpnoise
