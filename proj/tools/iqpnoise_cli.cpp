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


// Command-line front end: generate, encode, spectrum, sample, metrics,
// experiment, plots.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "iqpnoise/acceptance.hpp"
#include "iqpnoise/circuit.hpp"
#include "iqpnoise/encoding.hpp"
#include "iqpnoise/error.hpp"
#include "iqpnoise/experiment.hpp"
#include "iqpnoise/fourier_mc.hpp"
#include "iqpnoise/metrics.hpp"
#include "iqpnoise/oracle.hpp"
#include "iqpnoise/sampler.hpp"

namespace {

using namespace iqpnoise;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    if (!text.empty() && text.back() != '\n') std::fputc('\n', stdout);
  } else {
    write_file(output, text);
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

TruncatedSpectrum load_spectrum(const std::string& path) {
  if (ends_with(path, ".bin")) return read_spectrum_binary(path);
  return spectrum_from_json(read_file(path));
}

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string output;
};

// Shared flags; seed and workers are applied only when given explicitly.
void add_common(CLI::App* app, Common& common) {
  app->add_option("--config", common.config, "JSON configuration file");
  app->add_option("--seed", common.seed, "64-bit seed");
  app->add_option("--workers", common.workers, "worker threads")
      ->check(CLI::PositiveNumber);
  app->add_option("--output", common.output,
                  "output file or directory (stdout when omitted)");
}

bool given(const CLI::App* app, const std::string& flag) {
  return app->count(flag) > 0;
}

// generate

struct GenerateArgs {
  Common common;
  int n = 4;
  int depth = 3;
};

int run_generate(const CLI::App* app, const GenerateArgs& a) {
  RandomCircuitSpec spec{a.n, a.depth, a.common.seed};
  if (!a.common.config.empty()) {
    const ExperimentConfig c = config_from_json(read_file(a.common.config));
    spec = c.circuit;
    if (given(app, "--seed")) spec.seed = a.common.seed;
  }
  emit(a.common.output, circuit_to_json(generate_random_circuit(spec)));
  return 0;
}

// encode

struct EncodeArgs {
  Common common;
  std::string circuit;
  std::string variant;
};

int run_encode(const EncodeArgs& a) {
  ChaoticCircuit c = circuit_from_json(read_file(a.circuit));
  if (!a.variant.empty()) c = apply_variant(c, VariantLabel::parse(a.variant));
  emit(a.common.output, encoding_to_json(encode(c)));
  return 0;
}

// spectrum

struct SpectrumArgs {
  Common common;
  std::string circuit;
  double epsilon = 0.25;
  double delta = 0.3;
  std::string alpha = "measured";
  double safety = 1.0;
  std::uint64_t trials_cap = 0;
  int L = -1;
  std::string estimator = "sampled";
};

int run_spectrum(const SpectrumArgs& a) {
  const ChaoticCircuit c = circuit_from_json(read_file(a.circuit));
  const IqpEncoding enc = encode(c);
  double alpha = 0.0;
  if (a.alpha == "measured") {
    if (enc.width() > kJointTableLimit) {
      throw Error(ErrorCode::TooLarge,
                  "measured alpha needs n + m <= 24; pass --alpha");
    }
    const ProbDist joint = full_iqp_distribution(enc);
    double sq = 0.0;
    for (double p : joint.values) sq += p * p;
    alpha = std::ldexp(sq, enc.width());
  } else {
    alpha = std::stod(a.alpha);
  }
  TruncationParams params;
  if (a.epsilon > 0.0) {
    params = choose_params(a.delta, a.epsilon, alpha, c.n(), c.m(), a.safety,
                           a.common.seed);
  } else {
    params.delta = a.delta;
    params.epsilon = 0.0;
    params.alpha_chaos = alpha;
    params.L = enc.width();
    params.seed = a.common.seed;
  }
  if (a.L >= 0) {
    params.L = a.L;
    params.eta = coefficient_accuracy(a.delta, enc.width(), a.L);
    params.t_run = hoeffding_trials(params.eta, a.safety);
  }
  if (a.trials_cap > 0 && params.t_run > a.trials_cap) {
    params.t_run = a.trials_cap;
  }
  if (a.estimator == "exhaustive") params.mode = EstimatorMode::Exhaustive;
  BuildOptions opts;
  opts.workers = a.common.workers;
  const TruncatedSpectrum spec = build_truncated_spectrum(enc, params, opts);
  if (ends_with(a.common.output, ".bin")) {
    write_spectrum_binary(a.common.output, spec);
  } else {
    emit(a.common.output, spectrum_to_json(spec));
  }
  return 0;
}

// sample

struct SampleArgs {
  Common common;
  std::string spectrum;
  std::string variant;
  std::uint64_t count = 1000;
};

int run_sample(const SampleArgs& a) {
  const TruncatedSpectrum spec = load_spectrum(a.spectrum);
  const VariantLabel label = a.variant.empty()
                                 ? VariantLabel::zeros(spec.m())
                                 : VariantLabel::parse(a.variant);
  const SampleBatch batch =
      sample(spec, label, a.count, a.common.seed, a.common.workers);
  if (a.common.output.empty()) {
    emit("", samples_to_text(batch));
    return 0;
  }
  const std::filesystem::path dir(a.common.output);
  write_file(dir / "samples.txt", samples_to_text(batch));
  write_file(dir / "histogram.csv", histogram_to_csv(batch));
  write_file(dir / "metadata.json", batch_metadata_json(batch));
  return 0;
}

// metrics

struct MetricsArgs {
  Common common;
  std::string circuit;
  std::string spectrum;
  std::string variant;
  double epsilon = -1.0;
  double k = 2.0;
};

int run_metrics(const MetricsArgs& a) {
  const ChaoticCircuit c = circuit_from_json(read_file(a.circuit));
  const TruncatedSpectrum spec = load_spectrum(a.spectrum);
  if (spec.n() != c.n() || spec.m() != c.m()) {
    throw Error(ErrorCode::LengthMismatch, "spectrum does not match circuit");
  }
  const VariantLabel label = a.variant.empty() ? VariantLabel::zeros(c.m())
                                               : VariantLabel::parse(a.variant);
  const double eps = a.epsilon >= 0.0 ? a.epsilon : spec.params().epsilon;
  const double delta = spec.params().delta;
  const ProbDist p_qc = statevector_probs(c, label);
  const ProbDist p_exp = noisy_channel_distribution(c, label, eps);
  std::vector<double> p_cl(std::size_t{1} << c.n());
  for (Bits x = 0; x < p_cl.size(); ++x) {
    p_cl[x] = p_cl_conditional(spec, x, label.bits);
  }
  const MetricsReport report =
      make_metrics_report(p_exp.values, p_cl, p_qc.values, c.n(), delta, a.k);
  if (a.common.output.empty()) {
    emit("", metrics_to_json(report));
    return 0;
  }
  const std::filesystem::path dir(a.common.output);
  write_file(dir / "metrics.json", metrics_to_json(report));
  write_file(dir / "bounds.csv", bounds_to_csv(report, delta, a.k, c.n()));
  return 0;
}

// experiment / plots

struct ExperimentArgs {
  Common common;
  std::string preset;
  bool list = false;
};

constexpr std::string_view kCriterionPrefix = "criterion-";

int run_criterion_preset(const std::string& preset, unsigned workers) {
  const int id = std::stoi(preset.substr(kCriterionPrefix.size()));
  if (id < 1 || id > kCriterionCount) {
    throw Error(ErrorCode::Config, "unknown preset '" + preset + "'");
  }
  AcceptanceOptions options;
  options.workers = workers;
  const CriterionResult r = run_criterion(id, options);
  std::printf("%s\n", format_criterion(r).c_str());
  return r.pass ? 0 : 1;
}

ExperimentConfig resolve_config(const CLI::App* app, const ExperimentArgs& a) {
  if (!a.common.config.empty() && !a.preset.empty()) {
    throw Error(ErrorCode::Config, "use either --config or --preset");
  }
  ExperimentConfig c = a.common.config.empty()
                           ? preset_config(a.preset.empty() ? "desk-bound-check"
                                                            : a.preset)
                           : config_from_json(read_file(a.common.config));
  if (given(app, "--seed")) {
    c.seed = a.common.seed;
    c.circuit.seed = a.common.seed;
  }
  if (given(app, "--workers")) c.workers = a.common.workers;
  if (given(app, "--output")) c.output_dir = a.common.output;
  c.validate();
  return c;
}

void print_summary(const ExperimentResult& r) {
  std::printf("%s: n=%d m=%d L=%d coefficients=%llu variants=%zu\n",
              r.name.c_str(), r.n, r.m, r.params.L,
              static_cast<unsigned long long>(r.coefficient_count),
              r.variants.size());
  std::printf("lambda_av=%.6g lambda_max=%.6g e_delta=%.6g alpha=%.6g\n",
              r.lambda_av, r.lambda_max, r.e_delta, r.alpha_chaos);
  for (const BoundCheck& check : r.checks) {
    std::printf("  [%s] %s: %.6g <= %.6g%s\n", check.pass ? "PASS" : "FAIL",
                check.name.c_str(), check.value, check.bound,
                check.asserted ? "" : " (reported)");
  }
}

int run_experiment_cmd(const CLI::App* app, const ExperimentArgs& a,
                       bool plots) {
  if (a.list) {
    for (const std::string& name : preset_names()) {
      std::printf("%s\n", name.c_str());
    }
    for (int id = 1; id <= kCriterionCount; ++id) {
      std::printf("%s%d\n", kCriterionPrefix.data(), id);
    }
    return 0;
  }
  if (a.preset.rfind(kCriterionPrefix, 0) == 0) {
    if (plots) throw Error(ErrorCode::Config, "criterion presets have no plots");
    return run_criterion_preset(a.preset, a.common.workers);
  }
  const ExperimentConfig c = resolve_config(app, a);
  const ExperimentResult r = run_experiment(c);
  if (plots) {
    const std::string dir = c.output_dir.empty() ? "plots" : c.output_dir;
    emit_plot_data(r, dir);
    std::printf("plot data written to %s\n", dir.c_str());
  } else {
    if (!c.output_dir.empty()) write_result(r, c.output_dir);
    print_summary(r);
  }
  return r.all_asserted_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy IQP / chaotic circuit simulation toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "random chaotic circuit JSON");
  add_common(gen_cmd, gen.common);
  gen_cmd->add_option("--n", gen.n, "qubits")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--depth", gen.depth, "layers")->check(CLI::PositiveNumber);

  EncodeArgs enc;
  auto* enc_cmd = app.add_subcommand("encode", "IQP encoding of a circuit");
  add_common(enc_cmd, enc.common);
  enc_cmd->add_option("--circuit", enc.circuit, "circuit JSON")->required();
  enc_cmd->add_option("--variant", enc.variant, "x' bit string");

  SpectrumArgs spec;
  auto* spec_cmd =
      app.add_subcommand("spectrum", "truncated noisy Fourier spectrum");
  add_common(spec_cmd, spec.common);
  spec_cmd->add_option("--circuit", spec.circuit, "circuit JSON")->required();
  spec_cmd->add_option("--epsilon", spec.epsilon, "noise rate")
      ->check(CLI::Range(0.0, 1.0));
  spec_cmd->add_option("--delta", spec.delta, "target accuracy")
      ->check(CLI::Range(0.0, 1.0));
  spec_cmd->add_option("--alpha", spec.alpha, "chaos constant or 'measured'");
  spec_cmd->add_option("--safety", spec.safety, "trial-count multiplier");
  spec_cmd->add_option("--trials-cap", spec.trials_cap, "clamp on trials");
  spec_cmd->add_option("--L", spec.L, "truncation order override");
  spec_cmd->add_option("--estimator", spec.estimator, "sampled|exhaustive")
      ->check(CLI::IsMember({"sampled", "exhaustive"}));

  SampleArgs smp;
  auto* smp_cmd = app.add_subcommand("sample", "draw samples with the walk");
  add_common(smp_cmd, smp.common);
  smp_cmd->add_option("--spectrum", smp.spectrum, "spectrum JSON or .bin")
      ->required();
  smp_cmd->add_option("--variant", smp.variant, "x' bit string");
  smp_cmd->add_option("--count", smp.count, "number of samples");

  MetricsArgs met;
  auto* met_cmd = app.add_subcommand("metrics", "distances and bounds");
  add_common(met_cmd, met.common);
  met_cmd->add_option("--circuit", met.circuit, "circuit JSON")->required();
  met_cmd->add_option("--spectrum", met.spectrum, "spectrum JSON or .bin")
      ->required();
  met_cmd->add_option("--variant", met.variant, "x' bit string");
  met_cmd->add_option("--epsilon", met.epsilon,
                      "channel noise (default: spectrum epsilon)");
  met_cmd->add_option("--k", met.k, "Chebyshev multiple");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "end-to-end experiment");
  add_common(exp_cmd, exp.common);
  exp_cmd->add_option("--preset", exp.preset, "named preset or criterion-N");
  exp_cmd->add_flag("--list", exp.list, "list presets");

  ExperimentArgs plt;
  auto* plt_cmd = app.add_subcommand("plots", "plot-ready CSV series");
  add_common(plt_cmd, plt.common);
  plt_cmd->add_option("--preset", plt.preset, "named preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return run_generate(gen_cmd, gen);
    if (*enc_cmd) return run_encode(enc);
    if (*spec_cmd) return run_spectrum(spec);
    if (*smp_cmd) return run_sample(smp);
    if (*met_cmd) return run_metrics(met);
    if (*exp_cmd) return run_experiment_cmd(exp_cmd, exp, false);
    if (*plt_cmd) return run_experiment_cmd(plt_cmd, plt, true);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
