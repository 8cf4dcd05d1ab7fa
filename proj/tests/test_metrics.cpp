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


#include <algorithm>
#include <cmath>
#include <numbers>

#include "iqpnoise/metrics.hpp"
#include "iqpnoise/oracle.hpp"
#include "iqpnoise/rng.hpp"
#include "test_support.hpp"

using namespace iqpnoise;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> chaotic_probs(int n, int depth, std::uint64_t seed) {
  const ChaoticCircuit c = generate_random_circuit({n, depth, seed});
  return statevector_probs(c, VariantLabel::zeros(c.m())).values;
}

std::vector<double> uniform(std::size_t size) {
  return std::vector<double>(size, 1.0 / static_cast<double>(size));
}

}  // namespace

TEST_CASE("l1 distance examples") {
  const std::vector<double> a{0.2, 0.3, 0.5};
  REQUIRE(l1_distance(a, a) == 0.0);
  REQUIRE(l1_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}) ==
          2.0);
  REQUIRE(l1_distance(uniform(4), std::vector<double>{1, 0, 0, 0}) ==
          Approx(1.5));
  REQUIRE(l2_distance(std::vector<double>{1, 0}, std::vector<double>{0, 1}) ==
          Approx(std::sqrt(2.0)));
  REQUIRE_ERROR(l1_distance(a, uniform(4)), ErrorCode::LengthMismatch);
}

TEST_CASE("entropy examples") {
  const std::vector<double> delta{0.0, 1.0, 0.0, 0.0};
  REQUIRE(cross_entropy(delta, delta) == 0.0);
  REQUIRE(cross_entropy(uniform(16), uniform(16)) == Approx(std::log(16.0)));
  REQUIRE(shannon_entropy(uniform(8)) == Approx(std::log(8.0)));
  REQUIRE_ERROR(cross_entropy(uniform(4), delta), ErrorCode::InfiniteEntropy);
  const auto p = chaotic_probs(6, 18, 3);
  REQUIRE(cross_entropy(p, p) == Approx(shannon_entropy(p)).margin(1e-12));
}

TEST_CASE("delta quantities") {
  const auto pqc = chaotic_probs(6, 18, 2);
  const auto pexp = [&] {
    auto v = pqc;
    depolarize_outcomes(v, 6, 0.2);
    return v;
  }();
  const DeltaQuantities flat = delta_quantities(pexp, uniform(64), pqc);
  REQUIRE(flat.delta_H_cl == 0.0);
  double mean_log = 0.0;
  for (double v : pqc) mean_log -= std::log(v) / 64;
  REQUIRE(flat.s0 == Approx(mean_log).epsilon(1e-12));

  const DeltaQuantities same = delta_quantities(pexp, pexp, pqc);
  REQUIRE(same.delta_S == 0.0);
  REQUIRE(same.delta_exp == Approx(same.delta_cl));

  const DeltaQuantities ideal = delta_quantities(pexp, pqc, pqc);
  REQUIRE(ideal.delta_cl == Approx(0.0).margin(1e-12));
  REQUIRE(ideal.delta_H_cl_normalized == Approx(1.0));
  REQUIRE(ideal.delta_H_cl ==
          Approx(ideal.s0 - shannon_entropy(pqc)).epsilon(1e-12));
  REQUIRE(delta_s_upper_bound(pexp, uniform(64), pqc) >=
          delta_quantities(pexp, uniform(64), pqc).delta_S);
}

TEST_CASE("Porter-Thomas entropy gap S0 - S(p_qc) is one on average") {
  double mean = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = chaotic_probs(6, 18, seed);
    const DeltaQuantities d = delta_quantities(p, p, p);
    mean += d.delta_H_cl / 10;
  }
  REQUIRE(mean == Approx(1.0).margin(0.25));
}

TEST_CASE("cross-entropy bound arithmetic") {
  const double ln2 = std::log(2.0);
  const double expected =
      0.1 * std::sqrt(std::pow(48 * ln2 + kEulerGamma, 2) + kPi * kPi / 6);
  REQUIRE(e_delta_bound(0.1, 48) == Approx(expected).epsilon(1e-14));
  REQUIRE(e_delta_bound(0.1, 48) == Approx(3.384).margin(0.005));
  REQUIRE(e_delta_bound(0.0, 5) == 0.0);
  REQUIRE(e_delta_bound(0.3, 1) ==
          Approx(0.3 * std::sqrt(std::pow(ln2 + kEulerGamma, 2) + kPi * kPi / 6)));
  REQUIRE_ERROR(e_delta_bound(0.1, 0), ErrorCode::BadRange);
}

TEST_CASE("measured E_Delta") {
  const auto p = chaotic_probs(4, 6, 1);
  std::vector<EnsembleMember> same{{p, p, p}, {p, p, p}};
  REQUIRE(measured_e_delta(same) == 0.0);
  const auto flat = uniform(16);
  std::vector<EnsembleMember> one{{p, flat, p}};
  REQUIRE(measured_e_delta(one) == delta_quantities(p, flat, p).delta_S);
  REQUIRE_ERROR(measured_e_delta(std::vector<EnsembleMember>{}),
                ErrorCode::BadRange);
}

TEST_CASE("Chebyshev and sampler bounds") {
  REQUIRE(chebyshev_tail(10.0) == Approx(0.02));
  REQUIRE(chebyshev_tail(2.0) == Approx(0.5));
  REQUIRE(sampler_bound(2.0, 0.1) == Approx(1.0));
  REQUIRE_ERROR(sampler_bound(2.0, 0.5), ErrorCode::BadRange);
  REQUIRE_ERROR(sampler_bound(2.0, 0.6), ErrorCode::BadRange);
  REQUIRE_ERROR(chebyshev_tail(0.0), ErrorCode::BadRange);
}

TEST_CASE("Euler integrals") {
  const EulerIntegrals e = euler_integral_suite(4001, 64.0);
  REQUIRE(e.gamma == Approx(0.5772156649).margin(1e-6));
  REQUIRE(e.gamma2_pi2 ==
          Approx(kEulerGamma * kEulerGamma + kPi * kPi / 6).margin(1e-5));
  REQUIRE(e.gamma2_pi2 == Approx(1.97811).margin(1e-5));
  REQUIRE(e.residual < 1e-8);
  REQUIRE(e.i3 == Approx(e.i3_closed_form).epsilon(1e-8));
  REQUIRE_ERROR(euler_integral_suite(10, 64.0), ErrorCode::BadRange);
}

TEST_CASE("KS statistic against the exponential law") {
  Philox rng(31, 0);
  std::vector<double> draws(10000);
  for (double& d : draws) d = -std::log(1.0 - rng.uniform());
  REQUIRE(exponential_ks(draws) < 0.05);
  REQUIRE(porter_thomas_ks(uniform(64)) == Approx(1.0 - std::exp(-1.0)));
  REQUIRE(porter_thomas_ks(chaotic_probs(8, 24, 1)) < 0.1);
}

TEST_CASE("log-square mean") {
  REQUIRE(log_square_mean(uniform(32)) == Approx(std::pow(std::log(32.0), 2)));
  REQUIRE_ERROR(log_square_mean(std::vector<double>{1.0, 0.0}),
                ErrorCode::InfiniteEntropy);
}

TEST_CASE("metrics report and bound table") {
  const auto pqc = chaotic_probs(3, 6, 2);
  auto pexp = pqc;
  depolarize_outcomes(pexp, 3, 0.25);
  const auto pcl = uniform(8);
  const MetricsReport r = make_metrics_report(pexp, pcl, pqc, 3, 0.3, 2.0);
  REQUIRE(r.l1 == Approx(l1_distance(pcl, pexp)));
  REQUIRE(r.pt_moment_ratios.size() == 3);
  REQUIRE(r.bound_values.count("sampler_bound") == 1);
  REQUIRE(r.bound_values.at("e_delta_bound") == Approx(e_delta_bound(0.3, 3)));
  REQUIRE(r.bound_values.at("l1_sqrt_dim_l2") >= r.l1 - 1e-12);
  REQUIRE(r.bound_values.at("delta_exp_plus_delta_s") >=
          r.bound_values.at("delta_cl") - 1e-12);
  const std::string json = metrics_to_json(r);
  REQUIRE(json.find("\"bound_values\"") != std::string::npos);
  const std::string csv = bounds_to_csv(r, 0.3, 2.0, 3);
  REQUIRE(csv.rfind("name,formula_inputs,value\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') ==
          1 + static_cast<long>(r.bound_values.size()));
  const MetricsReport wide = make_metrics_report(pexp, pcl, pqc, 3, 0.3, 4.0);
  REQUIRE(wide.bound_values.count("sampler_bound") == 0);
}
