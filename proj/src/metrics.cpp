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

#include "iqpnoise/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "iqpnoise/error.hpp"

namespace iqpnoise {

namespace {

constexpr double kPiSquaredOverSix = std::numbers::pi * std::numbers::pi / 6.0;

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("vector lengths differ: {} vs {}", a, b));
  }
}

std::vector<double> uniform_of(std::size_t size) {
  return std::vector<double>(size, 1.0 / static_cast<double>(size));
}

}  // namespace

double l1_distance(std::span<const double> p, std::span<const double> q) {
  check_lengths(p.size(), q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return total;
}

double l2_distance(std::span<const double> p, std::span<const double> q) {
  check_lengths(p.size(), q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    total += d * d;
  }
  return std::sqrt(total);
}

double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  for (double v : p) {
    if (v > 0.0) total -= v * std::log(v);
  }
  return total;
}

double cross_entropy(std::span<const double> p, std::span<const double> q) {
  check_lengths(p.size(), q.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (!(q[i] > 0.0)) {
      throw Error(ErrorCode::InfiniteEntropy,
                  fmt::format("q({}) = {} where p({}) = {}", i, q[i], i, p[i]));
    }
    total -= p[i] * std::log(q[i]);
  }
  return total;
}

DeltaQuantities delta_quantities(std::span<const double> p_exp,
                                 std::span<const double> p_cl,
                                 std::span<const double> p_qc) {
  check_lengths(p_exp.size(), p_qc.size());
  check_lengths(p_cl.size(), p_qc.size());
  DeltaQuantities d;
  d.s0 = cross_entropy(uniform_of(p_qc.size()), p_qc);
  const double s_qc = shannon_entropy(p_qc);
  const double sc_exp = cross_entropy(p_exp, p_qc);
  const double sc_cl = cross_entropy(p_cl, p_qc);
  d.delta_exp = std::abs(s_qc - sc_exp);
  d.delta_cl = std::abs(s_qc - sc_cl);
  d.delta_S = std::abs(sc_exp - sc_cl);
  d.delta_H_exp = d.s0 - sc_exp;
  d.delta_H_cl = d.s0 - sc_cl;
  const double span = d.s0 - s_qc;
  d.delta_H_cl_normalized = span != 0.0 ? d.delta_H_cl / span : 0.0;
  return d;
}

double e_delta_bound(double delta, int n) {
  if (n < 1) throw Error(ErrorCode::BadRange, "n must be >= 1");
  const double a = n * std::numbers::ln2 + kEulerGamma;
  return delta * std::sqrt(a * a + kPiSquaredOverSix);
}

double measured_e_delta(std::span<const EnsembleMember> ensemble) {
  if (ensemble.empty()) {
    throw Error(ErrorCode::BadRange, "ensemble must not be empty");
  }
  double total = 0.0;
  for (const EnsembleMember& member : ensemble) {
    total += delta_quantities(member.p_exp, member.p_cl, member.p_qc).delta_S;
  }
  return total / static_cast<double>(ensemble.size());
}

double delta_s_upper_bound(std::span<const double> p_exp,
                           std::span<const double> p_cl,
                           std::span<const double> p_qc) {
  check_lengths(p_exp.size(), p_qc.size());
  check_lengths(p_cl.size(), p_qc.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p_qc.size(); ++i) {
    const double gap = std::abs(p_exp[i] - p_cl[i]);
    if (gap == 0.0) continue;
    if (!(p_qc[i] > 0.0)) {
      throw Error(ErrorCode::InfiniteEntropy,
                  fmt::format("p_qc({}) = {} under a nonzero gap", i, p_qc[i]));
    }
    total += gap * std::abs(std::log(p_qc[i]));
  }
  return total;
}

double chebyshev_tail(double k) {
  if (!(k > 0.0)) throw Error(ErrorCode::BadRange, "k must be > 0");
  return 2.0 / (k * k);
}

double sampler_bound(double k, double delta) {
  if (!(k > 0.0) || !(delta >= 0.0)) {
    throw Error(ErrorCode::BadRange, "sampler bound needs k > 0, delta >= 0");
  }
  const double kd = k * delta;
  if (kd >= 1.0) {
    throw Error(ErrorCode::BadRange,
                fmt::format("k * delta = {} must be < 1", kd));
  }
  return 4.0 * kd / (1.0 - kd);
}

EulerIntegrals euler_integral_suite(int points, double N) {
  if (points < 1000) {
    throw Error(ErrorCode::BadRange, "quadrature needs >= 1000 points");
  }
  if (!(N > 0.0)) throw Error(ErrorCode::BadRange, "N must be > 0");
  constexpr double lo = -45.0;
  constexpr double hi = 5.0;
  const double h = (hi - lo) / (points - 1);
  const double log_n = std::log(N);
  double s1 = 0.0, s2 = 0.0, mass = 0.0, shifted1 = 0.0, shifted2 = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = lo + h * i;
    // u = e^t, du = e^t dt; the weight e^{-u} e^t carries the Jacobian.
    const double w = std::exp(t - std::exp(t)) *
                     ((i == 0 || i == points - 1) ? 0.5 : 1.0);
    const double shifted = t - log_n;
    mass += w;
    s1 += w * t;
    s2 += w * t * t;
    shifted1 += w * shifted;
    shifted2 += w * shifted * shifted;
  }
  EulerIntegrals out;
  out.gamma = -h * s1;
  out.gamma2_pi2 = h * s2;
  out.i0 = h * s2;
  out.i1 = log_n * log_n * h * mass;
  out.i2 = 2.0 * log_n * h * shifted1;
  out.i3 = h * shifted2;
  out.residual = std::abs(out.i0 - out.i1 - out.i2 - out.i3);
  const double a = log_n + kEulerGamma;
  out.i3_closed_form = a * a + kPiSquaredOverSix;
  return out;
}

double exponential_ks(std::vector<double> samples) {
  if (samples.empty()) throw Error(ErrorCode::BadRange, "no samples");
  std::sort(samples.begin(), samples.end());
  const double count = static_cast<double>(samples.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = samples[i] > 0.0 ? -std::expm1(-samples[i]) : 0.0;
    worst = std::max({worst, (i + 1) / count - cdf, cdf - i / count});
  }
  return worst;
}

double porter_thomas_ks(std::span<const double> probs) {
  const double size = static_cast<double>(probs.size());
  std::vector<double> scaled(probs.begin(), probs.end());
  for (double& v : scaled) v *= size;
  return exponential_ks(std::move(scaled));
}

double log_square_mean(std::span<const double> probs) {
  if (probs.empty()) throw Error(ErrorCode::BadRange, "empty distribution");
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] > 0.0)) {
      throw Error(ErrorCode::InfiniteEntropy,
                  fmt::format("P({}) = {} has no logarithm", i, probs[i]));
    }
    const double l = std::log(probs[i]);
    total += l * l;
  }
  return total / static_cast<double>(probs.size());
}

MetricsReport make_metrics_report(std::span<const double> p_exp,
                                  std::span<const double> p_cl,
                                  std::span<const double> p_qc, int n,
                                  double delta, double k) {
  MetricsReport r;
  r.l1 = l1_distance(p_cl, p_exp);
  r.l2 = l2_distance(p_cl, p_exp);
  r.shannon = shannon_entropy(p_qc);
  r.cross_entropy = cross_entropy(p_cl, p_qc);
  const DeltaQuantities d = delta_quantities(p_exp, p_cl, p_qc);
  r.delta_H = d.delta_H_cl;
  r.delta_S = d.delta_S;
  double second = 0.0, cube = 0.0, fourth = 0.0;
  for (double p : p_qc) {
    second += p * p;
    cube += p * p * p;
    fourth += p * p * p * p;
  }
  const double size = static_cast<double>(p_qc.size());
  r.second_moment = second;
  r.pt_moment_ratios = {second * size / 2.0, cube * size * size / 6.0,
                        fourth * size * size * size / 24.0};
  r.bound_values["chebyshev_tail"] = chebyshev_tail(k);
  if (k * delta < 1.0) r.bound_values["sampler_bound"] = sampler_bound(k, delta);
  r.bound_values["e_delta_bound"] = e_delta_bound(delta, n);
  r.bound_values["delta_s_upper_bound"] = delta_s_upper_bound(p_exp, p_cl, p_qc);
  r.bound_values["l1_sqrt_dim_l2"] = std::sqrt(size) * r.l2;
  r.bound_values["delta_exp_plus_delta_s"] = d.delta_exp + d.delta_S;
  r.bound_values["delta_cl"] = d.delta_cl;
  return r;
}

std::string metrics_to_json(const MetricsReport& r) {
  std::string out = fmt::format(
      "{{\"l1\": {:.17g}, \"l2\": {:.17g}, \"shannon\": {:.17g}, "
      "\"cross_entropy\": {:.17g}, \"delta_H\": {:.17g}, \"delta_S\": {:.17g}, "
      "\"second_moment\": {:.17g}, \"pt_moment_ratios\": [",
      r.l1, r.l2, r.shannon, r.cross_entropy, r.delta_H, r.delta_S,
      r.second_moment);
  for (std::size_t i = 0; i < r.pt_moment_ratios.size(); ++i) {
    out += fmt::format("{}{:.17g}", i ? ", " : "", r.pt_moment_ratios[i]);
  }
  out += "], \"bound_values\": {";
  bool first = true;
  for (const auto& [name, value] : r.bound_values) {
    out += fmt::format("{}\"{}\": {:.17g}", first ? "" : ", ", name, value);
    first = false;
  }
  out += "}}";
  return out;
}

std::string bounds_to_csv(const MetricsReport& report, double delta, double k,
                          int n) {
  const std::string inputs =
      fmt::format("delta={:.17g};k={:.17g};n={}", delta, k, n);
  std::string out = "name,formula_inputs,value\n";
  for (const auto& [name, value] : report.bound_values) {
    out += fmt::format("{},{},{:.17g}\n", name, inputs, value);
  }
  return out;
}

}  // namespace iqpnoise
