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

#include <map>
#include <span>
#include <string>
#include <vector>

namespace iqpnoise {

inline constexpr double kEulerGamma = 0.57721566490153286061;

double l1_distance(std::span<const double> p, std::span<const double> q);
double l2_distance(std::span<const double> p, std::span<const double> q);

/// -sum p ln p, zero entries skipped.
double shannon_entropy(std::span<const double> p);

/// -sum p(x) ln q(x). Entries with p(x) = 0 contribute nothing; p(x) != 0
/// with q(x) <= 0 throws InfiniteEntropy. p may be signed.
double cross_entropy(std::span<const double> p, std::span<const double> q);

struct DeltaQuantities {
  double delta_exp = 0.0;
  double delta_cl = 0.0;
  double delta_S = 0.0;
  double delta_H_exp = 0.0;
  double delta_H_cl = 0.0;
  /// (S0 - S_c(p_cl, p_qc)) / (S0 - S(p_qc))
  double delta_H_cl_normalized = 0.0;
  double s0 = 0.0;
};

DeltaQuantities delta_quantities(std::span<const double> p_exp,
                                 std::span<const double> p_cl,
                                 std::span<const double> p_qc);

/// delta * sqrt((n ln 2 + gamma)^2 + pi^2 / 6)
double e_delta_bound(double delta, int n);

struct EnsembleMember {
  std::vector<double> p_exp;
  std::vector<double> p_cl;
  std::vector<double> p_qc;
};

/// Average Delta_S over the ensemble.
double measured_e_delta(std::span<const EnsembleMember> ensemble);

/// sum |p_exp - p_cl| |ln p_qc|
double delta_s_upper_bound(std::span<const double> p_exp,
                           std::span<const double> p_cl,
                           std::span<const double> p_qc);

double chebyshev_tail(double k);
/// 4 k delta / (1 - k delta); BadRange when k delta >= 1.
double sampler_bound(double k, double delta);

struct EulerIntegrals {
  double gamma = 0.0;          // -int e^{-x} ln x
  double gamma2_pi2 = 0.0;     // int e^{-x} (ln x)^2
  double i0 = 0.0;
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double residual = 0.0;       // |I0 - I1 - I2 - I3|
  double i3_closed_form = 0.0; // (ln N + gamma)^2 + pi^2/6
};

/// Trapezoid rule in the variable t = ln x, where every integrand is smooth
/// and decays double-exponentially; `points` nodes on [-45, 5].
EulerIntegrals euler_integral_suite(int points, double N);

/// One-sample Kolmogorov-Smirnov statistic of u = N P(x) against the
/// Porter-Thomas law with CDF 1 - e^{-u}.
double porter_thomas_ks(std::span<const double> probs);

/// KS statistic of arbitrary samples against 1 - e^{-u}.
double exponential_ks(std::vector<double> samples);

/// (1/N) sum_x (ln P(x))^2, the Porter-Thomas prediction being
/// (n ln 2 + gamma)^2 + pi^2/6.
double log_square_mean(std::span<const double> probs);

struct MetricsReport {
  double l1 = 0.0;
  double l2 = 0.0;
  double shannon = 0.0;
  double cross_entropy = 0.0;
  double delta_H = 0.0;
  double delta_S = 0.0;
  double second_moment = 0.0;
  std::vector<double> pt_moment_ratios;
  std::map<std::string, double> bound_values;
};

/// Report comparing a classical reconstruction to the experiment, with P_qc
/// as reference. `delta` and `k` feed the bound table.
MetricsReport make_metrics_report(std::span<const double> p_exp,
                                  std::span<const double> p_cl,
                                  std::span<const double> p_qc, int n,
                                  double delta, double k);

std::string metrics_to_json(const MetricsReport& report);
std::string bounds_to_csv(const MetricsReport& report, double delta, double k,
                          int n);

}  // namespace iqpnoise
