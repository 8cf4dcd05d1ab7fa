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
#include <filesystem>
#include <numeric>

#include "iqpnoise/fourier_mc.hpp"
#include "iqpnoise/oracle.hpp"
#include "test_support.hpp"

using namespace iqpnoise;
using iqpnoise::testing::max_abs_diff;
using Catch::Approx;

namespace {

double measured_alpha(const IqpEncoding& e) {
  double sq = 0.0;
  for (double p : full_iqp_distribution(e).values) sq += p * p;
  return std::ldexp(sq, e.width());
}

TruncationParams exhaustive_params(int L, double eps) {
  TruncationParams p;
  p.delta = 0.3;
  p.epsilon = eps;
  p.L = L;
  p.mode = EstimatorMode::Exhaustive;
  return p;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("truncation order examples") {
  REQUIRE(std::log(200.0) / 0.4 == Approx(13.2458).epsilon(1e-4));
  REQUIRE(choose_params(0.1, 0.2, 2.0, 1, 1).L == 14);
  REQUIRE(choose_params(0.1, 1.0, 2.0, 1, 1).L == 3);
  REQUIRE(choose_params(0.1, 0.2, 0.01, 1, 1).L == 0);
  REQUIRE(choose_params(0.1, 0.2, 0.005, 1, 1).L == 0);
  REQUIRE(truncation_order(0.3, 0.25, 2.0) ==
          static_cast<int>(std::ceil(std::log(2.0 / 0.09) / 0.5)));
}

TEST_CASE("accuracy and trial count follow the Hoeffding sizing") {
  const TruncationParams p = choose_params(0.2, 0.6, 1.4, 2, 12, 1.0, 5);
  const int width = 14;
  const double eta = 0.2 / std::sqrt(std::pow(14.0, p.L) + 1.0);
  REQUIRE(p.eta == Approx(eta).epsilon(1e-15));
  REQUIRE(coefficient_accuracy(0.2, width, p.L) == p.eta);
  REQUIRE(p.t_run == static_cast<std::uint64_t>(
                         std::ceil(std::log(200.0) / (2 * eta * eta))));
  REQUIRE(hoeffding_trials(eta, 4.0) >= 4 * p.t_run - 4);
  REQUIRE(p.seed == 5);
  REQUIRE_ERROR(hoeffding_trials(1e-12), ErrorCode::Overflow);
}

TEST_CASE("parameter validation") {
  REQUIRE_ERROR(choose_params(0.0, 0.2, 2.0, 2, 2), ErrorCode::BadRange);
  REQUIRE_ERROR(choose_params(0.1, 0.0, 2.0, 2, 2), ErrorCode::BadRange);
  REQUIRE_ERROR(choose_params(0.1, 0.2, 2.0, 2, 2, 0.5), ErrorCode::BadRange);
  TruncationParams p;
  p.epsilon = 1.5;
  REQUIRE_ERROR(p.validate(), ErrorCode::BadEpsilon);
  p.epsilon = 0.0;
  p.validate();
  p.t_run = 0;
  REQUIRE_ERROR(p.validate(), ErrorCode::BadRange);
}

TEST_CASE("entry counts and canonical masks") {
  REQUIRE(truncated_entry_count(10, 2) == 56);
  REQUIRE(truncated_entry_count(10, 2) <= 10 * 10 + 1);
  REQUIRE(truncated_entry_count(10, 20) == 1024);
  REQUIRE(truncated_entry_count(64, 3) ==
          1 + 64 + binomial(64, 2) + binomial(64, 3));
  REQUIRE(truncated_entry_count(64, 63) == ~std::uint64_t{0});
  REQUIRE_ERROR(truncated_entry_count(64, 64), ErrorCode::Overflow);

  const std::vector<Bits> masks = canonical_masks(10, 2);
  REQUIRE(masks.size() == 56);
  REQUIRE(masks[0] == 0);
  REQUIRE(masks[1] == 1);
  REQUIRE(masks[10] == Bits{1} << 9);
  REQUIRE(masks[11] == 0b11);
  for (std::size_t i = 1; i < masks.size(); ++i) {
    const bool ordered =
        weight(masks[i - 1]) < weight(masks[i]) ||
        (weight(masks[i - 1]) == weight(masks[i]) && masks[i - 1] < masks[i]);
    REQUIRE(ordered);
  }
}

TEST_CASE("the zero shift estimate is exactly 2^-(n+m)") {
  const IqpEncoding e = encode(generate_random_circuit({3, 3, 2}));
  REQUIRE(estimate_coefficient(e, 0, 0, 1000, 1) == std::ldexp(1.0, -12));
}

TEST_CASE("exact autocorrelation equals the full spectrum") {
  const IqpEncoding e = encode(generate_random_circuit({2, 2, 3}));
  const FourierTable table = full_spectrum(full_iqp_distribution(e));
  for (Bits mask = 0; mask < 64; ++mask) {
    REQUIRE(exact_coefficient(e, mask & 3U, mask >> 2) ==
            Approx(table.coefficients[mask]).margin(1e-15));
  }
  REQUIRE_ERROR(exact_coefficient(e, 4, 0), ErrorCode::LengthMismatch);
}

TEST_CASE("single J(0) coefficient at (1,1) converges to the oracle") {
  const IqpEncoding e = encode(ChaoticCircuit(1, {JGate{0, Angle(0.0)}}));
  const double oracle =
      full_spectrum(full_iqp_distribution(e)).coefficients[0b11];
  REQUIRE(exact_coefficient(e, 1, 1) == Approx(oracle).margin(1e-16));
  const std::uint64_t t = 200000;
  const double est = estimate_coefficient(e, 1, 1, t, 17);
  REQUIRE(std::abs(est - oracle) < 5 * 0.25 / std::sqrt(double(t)));
}

TEST_CASE("sampled estimates lie within 5 sigma of exact values") {
  const IqpEncoding e = encode(generate_random_circuit({3, 4, 6}));  // width 15
  const std::uint64_t t = 20000;
  const double scale = std::ldexp(1.0, -e.width());
  int index = 0;
  for (Bits mask : canonical_masks(e.width(), 2)) {
    const Bits s = mask & 7U;
    const Bits sp = mask >> 3;
    const double est = estimate_coefficient(e, s, sp, t, 9, index);
    REQUIRE(est == estimate_coefficient(e, s, sp, t, 9, index));
    REQUIRE(std::abs(est - exact_coefficient(e, s, sp)) <
            5 * scale / std::sqrt(double(t)));
    if (++index == 40) break;
  }
}

TEST_CASE("L = 0 spectrum holds only the mean coefficient") {
  const IqpEncoding e = encode(generate_random_circuit({2, 3, 1}));
  TruncationParams p;
  p.delta = 0.3;
  p.epsilon = 0.2;
  p.L = 0;
  p.t_run = 10;
  const TruncatedSpectrum s = build_truncated_spectrum(e, p);
  REQUIRE(s.size() == 1);
  REQUIRE(s.masks()[0] == 0);
  REQUIRE(s.values()[0] == std::ldexp(1.0, -8));
  for (Bits x = 0; x < 4; ++x) {
    REQUIRE(p_cl_joint(s, x, 5) == std::ldexp(1.0, -8));
    REQUIRE(p_cl_conditional(s, x, 5) == 0.25);
  }
}

TEST_CASE("noise-free exhaustive spectrum reproduces the full spectrum") {
  const ChaoticCircuit c = generate_random_circuit({3, 2, 4});
  const IqpEncoding e = encode(c);
  const ProbDist joint = full_iqp_distribution(e);
  const FourierTable table = full_spectrum(joint);
  const TruncatedSpectrum s =
      build_truncated_spectrum(e, exhaustive_params(e.width(), 0.0));
  REQUIRE(s.size() == table.coefficients.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    REQUIRE(s.values()[i] ==
            Approx(table.coefficients[s.masks()[i]]).margin(1e-12));
  }
  REQUIRE(max_abs_diff(p_cl_dense(s).values, joint.values) < 1e-9);
  for (Bits xp = 0; xp < 64; xp += 7) {
    const ProbDist pq = statevector_probs(c, {xp, 6});
    for (Bits x = 0; x < 8; ++x) {
      REQUIRE(p_cl_joint(s, x, xp) ==
              Approx(joint.values[join_bits(x, xp, 3)]).margin(1e-9));
      REQUIRE(p_cl_conditional(s, x, xp) == Approx(pq.values[x]).margin(1e-9));
    }
  }
}

TEST_CASE("sampled estimates are damped by (1 - eps)^|ss'|") {
  const IqpEncoding e = encode(generate_random_circuit({2, 2, 2}));
  TruncationParams p;
  p.delta = 0.3;
  p.epsilon = 0.3;
  p.L = 3;
  p.t_run = 5000;
  p.seed = 21;
  const TruncatedSpectrum s = build_truncated_spectrum(e, p);
  const std::vector<Bits> masks = canonical_masks(6, 3);
  REQUIRE(s.masks() == masks);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const double raw = estimate_coefficient(e, masks[i] & 3U, masks[i] >> 2,
                                            p.t_run, p.seed, i);
    REQUIRE(s.values()[i] ==
            Approx(raw * std::pow(0.7, weight(masks[i]))).epsilon(1e-12));
  }
}

TEST_CASE("spectrum does not depend on the worker count") {
  const IqpEncoding e = encode(generate_random_circuit({3, 3, 8}));
  TruncationParams p;
  p.delta = 0.3;
  p.epsilon = 0.25;
  p.L = 2;
  p.t_run = 3000;
  p.seed = 4;
  BuildOptions one;
  BuildOptions many;
  many.workers = 4;
  const TruncatedSpectrum a = build_truncated_spectrum(e, p, one);
  const TruncatedSpectrum b = build_truncated_spectrum(e, p, many);
  REQUIRE(a == b);
  BuildOptions tight;
  tight.entry_budget = 10;
  REQUIRE_ERROR(build_truncated_spectrum(e, p, tight), ErrorCode::Overflow);
}

TEST_CASE("truncated exhaustive reconstruction satisfies the l2 target") {
  // n + m = 12, eps = 0.2, delta = 0.3, measured alpha
  const IqpEncoding e = encode(generate_random_circuit({3, 3, 11}));
  REQUIRE(e.width() == 12);
  const double alpha = measured_alpha(e);
  TruncationParams p = exhaustive_params(truncation_order(0.3, 0.2, alpha), 0.2);
  p.alpha_chaos = alpha;
  const TruncatedSpectrum s = build_truncated_spectrum(e, p);
  const ProbDist noisy = noisy_distribution_exact(e, 0.2);
  const ProbDist pcl = p_cl_dense(s);
  double sq = 0.0;
  for (std::size_t i = 0; i < pcl.values.size(); ++i) {
    sq += std::pow(pcl.values[i] - noisy.values[i], 2);
  }
  REQUIRE(sq <= std::pow(2 * 0.3, 2) / 4096.0);
}

TEST_CASE("Omega split and decay curve") {
  const IqpEncoding e = encode(generate_random_circuit({2, 3, 5}));
  const double eps = 0.25;
  const FourierTable noisy =
      full_spectrum(noisy_distribution_exact(e, eps));
  const TruncatedSpectrum s =
      truncate_spectrum(full_spectrum(full_iqp_distribution(e)),
                        exhaustive_params(3, eps));
  const OmegaSplit split = omega_split(s, noisy);
  REQUIRE(split.omega1 < 1e-24);

  const std::vector<double> curve = omega2_curve(noisy, 8);
  REQUIRE(curve.size() == 9);
  REQUIRE(split.omega2 == Approx(curve[3]).epsilon(1e-12));
  const double alpha = measured_alpha(e);
  double tail0 = 0.0;
  for (std::size_t i = 1; i < noisy.coefficients.size(); ++i) {
    tail0 += noisy.coefficients[i] * noisy.coefficients[i];
  }
  REQUIRE(curve[0] == Approx(std::ldexp(tail0, 2 * 8)).epsilon(1e-12));
  for (int L = 0; L <= 8; ++L) {
    if (L > 0) REQUIRE(curve[L] <= curve[L - 1]);
    REQUIRE(curve[L] <= alpha * std::pow(1 - eps, 2 * L) * (1 + 1e-12));
  }
  REQUIRE(curve[8] == 0.0);
}

TEST_CASE("spectrum serialisation round trips") {
  const IqpEncoding e = encode(generate_random_circuit({2, 2, 7}));
  TruncationParams p;
  p.delta = 0.3;
  p.epsilon = 0.25;
  p.L = 2;
  p.t_run = 500;
  p.seed = 3;
  const TruncatedSpectrum s = build_truncated_spectrum(e, p);
  const TruncatedSpectrum j = spectrum_from_json(spectrum_to_json(s));
  REQUIRE(j == s);
  REQUIRE(j.params().L == 2);
  REQUIRE(j.params().t_run == 500);
  REQUIRE(spectrum_to_json(j) == spectrum_to_json(s));
  const auto path = std::filesystem::temp_directory_path() / "iqpnoise_spec.bin";
  write_spectrum_binary(path.string(), s);
  REQUIRE(read_spectrum_binary(path.string()) == s);
  std::filesystem::remove(path);
  REQUIRE_ERROR(spectrum_from_json("{}"), ErrorCode::Config);
}

TEST_CASE("spectrum constructor validation") {
  TruncationParams p;
  p.L = 1;
  REQUIRE_ERROR(TruncatedSpectrum(1, 1, p, {0, 3}, {0.25, 0.0}),
                ErrorCode::BadRange);
  REQUIRE_ERROR(TruncatedSpectrum(1, 1, p, {0, 4}, {0.25, 0.0}),
                ErrorCode::BadRange);
  REQUIRE_ERROR(TruncatedSpectrum(1, 1, p, {0}, {0.25, 0.0}),
                ErrorCode::LengthMismatch);
  const TruncatedSpectrum ok(1, 1, p, {0, 2}, {0.25, 0.1});
  REQUIRE(ok.at(2) == 0.1);
  REQUIRE(ok.at(1) == 0.0);
}
