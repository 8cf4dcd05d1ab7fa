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

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "iqpnoise/bits.hpp"
#include "iqpnoise/encoding.hpp"
#include "iqpnoise/oracle.hpp"

namespace iqpnoise {

enum class EstimatorMode {
  /// t_run uniform draws of (y, y') per coefficient
  Sampled,
  /// exact average over all 2^(n+m) strings (n + m <= 24)
  Exhaustive,
};

/// Per-coefficient failure probability used when sizing t_run via Hoeffding.
inline constexpr double kCoefficientFailure = 0.01;
inline constexpr std::uint64_t kDefaultEntryBudget = 100'000'000;

struct TruncationParams {
  double delta = 0.1;
  double epsilon = 0.1;
  double alpha_chaos = 2.0;
  int L = 0;
  double eta = 1.0;
  std::uint64_t t_run = 1;
  std::uint64_t seed = 0;
  EstimatorMode mode = EstimatorMode::Sampled;

  /// Throws BadRange unless 0 < delta < 1, 0 <= epsilon <= 1, L >= 0,
  /// t_run >= 1 and eta > 0.
  void validate() const;
};

/// L = ceil(ln(alpha/delta^2) / (2 eps)) (0 when alpha <= delta^2),
/// eta = delta / sqrt((n+m)^L + 1),
/// t_run = ceil(safety * ln(2 / 0.01) / (2 eta^2)).
TruncationParams choose_params(double delta, double epsilon,
                               double alpha_chaos, int n, int m,
                               double safety = 1.0, std::uint64_t seed = 0);

/// L = ceil(ln(alpha/delta^2) / (2 eps)), 0 when alpha <= delta^2.
int truncation_order(double delta, double epsilon, double alpha_chaos);

/// delta / sqrt(width^L + 1)
double coefficient_accuracy(double delta, int width, int L);

/// Hoeffding trial count for accuracy eta at failure probability `failure`.
std::uint64_t hoeffding_trials(double eta, double safety = 1.0,
                               double failure = kCoefficientFailure);

/// sum_{k<=L} C(width, k)
std::uint64_t truncated_entry_count(int width, int L);

/// All masks of weight <= L over `width` bits in canonical order: by weight,
/// then by integer value.
std::vector<Bits> canonical_masks(int width, int L);

/// Monte Carlo estimate of the IQP Fourier coefficient at shift (s, s'):
/// 2^{-(n+m)} mean over t uniform (y,y') of Re[conj f(y,y') f(y^s, y'^s')].
/// Draws come from the counter stream (stream_seed, stream_index).
double estimate_coefficient(const IqpEncoding& encoding, Bits s, Bits sp,
                            std::uint64_t trials, std::uint64_t stream_seed,
                            std::uint64_t stream_index = 0);

/// Exact value of the same average, enumerating all (y, y').
double exact_coefficient(const IqpEncoding& encoding, Bits s, Bits sp);

/// Sparse spectrum of damped estimates over |ss'| <= L, stored in canonical
/// order. Keys are joint-layout masks (s in the low n bits).
class TruncatedSpectrum {
 public:
  TruncatedSpectrum(int n, int m, TruncationParams params,
                    std::vector<Bits> masks, std::vector<double> values);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int width() const noexcept { return n_ + m_; }
  const TruncationParams& params() const noexcept { return params_; }
  const std::vector<Bits>& masks() const noexcept { return masks_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return masks_.size(); }

  /// Damped coefficient at `mask`, 0 when absent.
  double at(Bits mask) const;

  friend bool operator==(const TruncatedSpectrum& a,
                         const TruncatedSpectrum& b) {
    return a.n_ == b.n_ && a.m_ == b.m_ && a.masks_ == b.masks_ &&
           a.values_ == b.values_;
  }

 private:
  int n_;
  int m_;
  TruncationParams params_;
  std::vector<Bits> masks_;
  std::vector<double> values_;
  std::unordered_map<Bits, std::size_t> index_;
};

struct BuildOptions {
  unsigned workers = 1;
  std::uint64_t entry_budget = kDefaultEntryBudget;
};

/// Estimates every |ss'| <= L coefficient with its own substream (seed,
/// canonical index) and multiplies by (1-eps)^{|ss'|}. The result does not
/// depend on `workers`.
TruncatedSpectrum build_truncated_spectrum(const IqpEncoding& encoding,
                                           const TruncationParams& params,
                                           const BuildOptions& options = {});

/// Exact noise-free spectrum truncated to L and damped, taken from the full
/// WHT; used as the Omega_1 = 0 reference.
TruncatedSpectrum truncate_spectrum(const FourierTable& table,
                                    const TruncationParams& params);

/// P_cl(x, x') = sum_{|ss'|<=L} Q^eps(s,s') (-1)^{ss'.xx'}; may be negative.
double p_cl_joint(const TruncatedSpectrum& spectrum, Bits x, Bits xp);

/// 2^m P_cl(x, x').
double p_cl_conditional(const TruncatedSpectrum& spectrum, Bits x, Bits xp);

/// Every P_cl(x, x') at once through one inverse WHT (n + m <= 24).
ProbDist p_cl_dense(const TruncatedSpectrum& spectrum);

/// Omega_1, Omega_2 split of the Parseval bound, against the exact noisy
/// spectrum of the same encoding.
struct OmegaSplit {
  double omega1 = 0.0;
  double omega2 = 0.0;
};

OmegaSplit omega_split(const TruncatedSpectrum& spectrum,
                       const FourierTable& exact_noisy);

/// Omega_2(L) = 2^{2(n+m)} sum_{|ss'|>L} coefficient^2 for L = 0..max_L.
std::vector<double> omega2_curve(const FourierTable& exact_noisy, int max_L);

std::string spectrum_to_json(const TruncatedSpectrum& spectrum);
TruncatedSpectrum spectrum_from_json(const std::string& text);
void write_spectrum_binary(const std::string& path,
                           const TruncatedSpectrum& spectrum);
TruncatedSpectrum read_spectrum_binary(const std::string& path);

}  // namespace iqpnoise
