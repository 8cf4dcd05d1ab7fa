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
#include <optional>
#include <string>
#include <vector>

#include "iqpnoise/bits.hpp"
#include "iqpnoise/circuit.hpp"
#include "iqpnoise/fourier_mc.hpp"

namespace iqpnoise {

struct ExperimentConfig {
  std::string name = "experiment";
  /// Random circuit, unless `circuit_file` names a circuit JSON file.
  RandomCircuitSpec circuit{4, 3, 1};
  std::string circuit_file;
  double epsilon = 0.25;
  double delta = 0.3;
  /// nullopt means "measured": 2^(n-m) sum_{x'} R_{x'}.
  std::optional<double> alpha_chaos;
  double k = 2.0;
  /// 0 evaluates every variant; otherwise that many drawn uniformly.
  std::uint64_t variant_sample_count = 0;
  /// Empirical walks per sampled variant.
  std::uint64_t sample_count = 1000;
  /// Number of evaluated variants that also get empirical walks.
  std::uint64_t sampled_variants = 1;
  std::uint64_t seed = 1;
  bool exact_oracle = true;
  std::string output_dir;
  double safety = 1.0;
  /// 0 keeps the Hoeffding t_run; otherwise t_run is clamped to this.
  std::uint64_t trials_cap = 0;
  EstimatorMode mode = EstimatorMode::Sampled;
  std::optional<int> L_override;
  int omega_max_L = 8;
  unsigned workers = 1;

  /// Throws Config (including k * delta >= 1) before anything is computed.
  void validate() const;
};

ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct VariantRecord {
  Bits label = 0;
  double lambda = 0.0;       // ||P_cl - P_exp||_1
  double delta_S = 0.0;      // +inf when P_qc lacks support
  double normalization = 0.0;
  double second_moment = 0.0;
  bool precondition = false;  // lambda <= k delta
  bool walk_ok = false;
  std::string walk_error;
  double walk_l1 = 0.0;          // ||Alg - P_exp||_1
  double walk_math_gap = 0.0;    // ||P_cl/S - Alg||_1
  double walk_negative_mass = 0.0;  // (2/S) sum_{p<0} |p|
  double dominance_excess = 0.0;    // max_x (a_x - p_x/S)
};

struct BoundCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool asserted = true;
};

struct ExperimentResult {
  std::string name;
  int n = 0;
  int m = 0;
  TruncationParams params;
  double k = 0.0;
  std::uint64_t t_run_theory = 0;  // 0 when it exceeds 2^63
  std::uint64_t coefficient_count = 0;
  double alpha_chaos = 0.0;
  bool alpha_measured = false;
  std::vector<VariantRecord> variants;

  double lambda_av = 0.0;
  double lambda_max = 0.0;
  double e_delta = 0.0;
  std::optional<double> omega1;
  std::optional<double> omega2;
  std::vector<double> omega2_curve;
  double chebyshev_fraction = 0.0;
  double normalization_gap_max = 0.0;
  std::vector<double> porter_thomas_values;  // N * P_qc over evaluated variants
  double porter_thomas_ks = 0.0;
  double log_square_mean = 0.0;
  std::vector<std::string> sample_histograms;
  std::vector<BoundCheck> checks;

  bool all_asserted_pass() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

std::string result_to_json(const ExperimentResult& result);
std::string variants_to_csv(const ExperimentResult& result);

/// Writes result.json and variants.csv into `dir`.
void write_result(const ExperimentResult& result, const std::string& dir);

/// Writes lambda_tail.csv, omega2_curve.csv and porter_thomas.csv into `dir`.
void emit_plot_data(const ExperimentResult& result, const std::string& dir);

/// Built-in experiment presets by name; throws Config on unknown names.
ExperimentConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace iqpnoise
