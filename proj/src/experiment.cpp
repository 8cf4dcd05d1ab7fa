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

#include "iqpnoise/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "iqpnoise/encoding.hpp"
#include "iqpnoise/error.hpp"
#include "iqpnoise/metrics.hpp"
#include "iqpnoise/oracle.hpp"
#include "iqpnoise/rng.hpp"
#include "iqpnoise/sampler.hpp"

namespace iqpnoise {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kChebyshevSlack = 0.05;
constexpr double kLambdaFactor = 2.0;
constexpr double kDominanceTolerance = 1e-12;
constexpr double kIdentityTolerance = 1e-9;
constexpr int kPlotBins = 40;
constexpr double kPlotMaxU = 8.0;

const std::set<std::string> kConfigKeys = {
    "name",          "circuit",          "circuit_file", "epsilon",
    "delta",         "alpha_chaos",      "k",            "variant_sample_count",
    "sample_count",  "sampled_variants", "seed",         "exact_oracle",
    "output_dir",    "safety",           "trials_cap",   "estimator",
    "L",             "omega_max_L",      "workers"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Json number_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

TruncationParams resolve_params(const ExperimentConfig& cfg, double alpha,
                                int width, std::uint64_t& theory) {
  TruncationParams p;
  p.delta = cfg.delta;
  p.epsilon = cfg.epsilon;
  p.alpha_chaos = alpha;
  p.seed = cfg.seed;
  p.mode = cfg.mode;
  if (cfg.L_override) {
    p.L = *cfg.L_override;
  } else if (cfg.epsilon > 0.0) {
    p.L = truncation_order(cfg.delta, cfg.epsilon, alpha);
  } else {
    p.L = width;
  }
  p.L = std::min(p.L, width);
  p.eta = coefficient_accuracy(cfg.delta, width, p.L);
  try {
    theory = hoeffding_trials(p.eta, cfg.safety);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Overflow) throw;
    theory = 0;
  }
  if (cfg.mode == EstimatorMode::Exhaustive) {
    p.t_run = theory == 0 ? 1 : theory;
  } else {
    std::uint64_t t = theory == 0 ? std::numeric_limits<std::uint64_t>::max()
                                  : theory;
    if (cfg.trials_cap > 0) t = std::min(t, cfg.trials_cap);
    if (theory == 0 && cfg.trials_cap == 0) {
      throw Error(ErrorCode::Overflow,
                  "Hoeffding trial count exceeds 2^63; set trials_cap");
    }
    p.t_run = t;
  }
  return p;
}

std::vector<Bits> choose_variants(const ExperimentConfig& cfg, int m) {
  const bool all = cfg.variant_sample_count == 0 ||
                   (m < 63 && cfg.variant_sample_count >= (std::uint64_t{1} << m));
  std::vector<Bits> out;
  if (all) {
    if (m > 24) {
      throw Error(ErrorCode::TooLarge,
                  "evaluating every variant needs m <= 24; set "
                  "variant_sample_count");
    }
    out.resize(std::size_t{1} << m);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
    return out;
  }
  Philox rng = make_stream(cfg.seed, StreamDomain::VariantChoice, 1);
  out.reserve(cfg.variant_sample_count);
  for (std::uint64_t i = 0; i < cfg.variant_sample_count; ++i) {
    out.push_back(rng.next_u64() & low_mask(m));
  }
  return out;
}

void add_check(ExperimentResult& r, std::string name, double value,
               double bound, bool asserted = true) {
  r.checks.push_back({std::move(name), value, bound, value <= bound, asserted});
}

}  // namespace

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::Config, what);
  };
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) fail("epsilon must be in [0, 1]");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must be in (0, 1)");
  if (!(k > 0.0)) fail("k must be > 0");
  if (!(k * delta < 1.0)) {
    fail(fmt::format("k * delta = {} must be < 1", k * delta));
  }
  if (!(safety >= 1.0)) fail("safety must be >= 1");
  if (alpha_chaos && !(*alpha_chaos > 0.0)) fail("alpha_chaos must be > 0");
  if (L_override && *L_override < 0) fail("L must be >= 0");
  if (omega_max_L < 0) fail("omega_max_L must be >= 0");
  if (circuit_file.empty()) {
    if (circuit.n < 1 || circuit.depth < 1) fail("circuit needs n, depth >= 1");
    const long long width =
        static_cast<long long>(circuit.n) * (circuit.depth + 1);
    if (width > kMaxBits) fail("n + m must be <= 64");
    if (exact_oracle && width > kJointTableLimit) {
      fail(fmt::format("exact_oracle needs n + m <= {}", kJointTableLimit));
    }
  }
}

ExperimentConfig config_from_json(const std::string& text) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be an object");
    for (const auto& [key, value] : doc.items()) {
      if (!kConfigKeys.count(key)) {
        throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
      }
    }
    ExperimentConfig c;
    c.name = doc.value("name", c.name);
    if (doc.contains("circuit")) {
      const auto& spec = doc.at("circuit");
      c.circuit.n = spec.at("n").get<int>();
      c.circuit.depth = spec.at("depth").get<int>();
      c.circuit.seed = spec.value("seed", std::uint64_t{0});
    }
    c.circuit_file = doc.value("circuit_file", c.circuit_file);
    c.epsilon = doc.value("epsilon", c.epsilon);
    c.delta = doc.value("delta", c.delta);
    if (doc.contains("alpha_chaos")) {
      const auto& a = doc.at("alpha_chaos");
      if (a.is_string()) {
        if (a.get<std::string>() != "measured") {
          throw Error(ErrorCode::Config,
                      "alpha_chaos must be a number or \"measured\"");
        }
      } else {
        c.alpha_chaos = a.get<double>();
      }
    }
    c.k = doc.value("k", c.k);
    c.variant_sample_count =
        doc.value("variant_sample_count", c.variant_sample_count);
    c.sample_count = doc.value("sample_count", c.sample_count);
    c.sampled_variants = doc.value("sampled_variants", c.sampled_variants);
    c.seed = doc.value("seed", c.seed);
    c.exact_oracle = doc.value("exact_oracle", c.exact_oracle);
    c.output_dir = doc.value("output_dir", c.output_dir);
    c.safety = doc.value("safety", c.safety);
    c.trials_cap = doc.value("trials_cap", c.trials_cap);
    const std::string mode = doc.value("estimator", std::string("sampled"));
    if (mode == "sampled") {
      c.mode = EstimatorMode::Sampled;
    } else if (mode == "exhaustive") {
      c.mode = EstimatorMode::Exhaustive;
    } else {
      throw Error(ErrorCode::Config, "estimator must be sampled|exhaustive");
    }
    if (doc.contains("L")) c.L_override = doc.at("L").get<int>();
    c.omega_max_L = doc.value("omega_max_L", c.omega_max_L);
    c.workers = doc.value("workers", c.workers);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("config JSON: ") + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  Json doc;
  doc["name"] = c.name;
  if (c.circuit_file.empty()) {
    doc["circuit"] = {{"n", c.circuit.n},
                      {"depth", c.circuit.depth},
                      {"seed", c.circuit.seed}};
  } else {
    doc["circuit_file"] = c.circuit_file;
  }
  doc["epsilon"] = c.epsilon;
  doc["delta"] = c.delta;
  doc["alpha_chaos"] = c.alpha_chaos ? Json(*c.alpha_chaos) : Json("measured");
  doc["k"] = c.k;
  doc["variant_sample_count"] = c.variant_sample_count;
  doc["sample_count"] = c.sample_count;
  doc["sampled_variants"] = c.sampled_variants;
  doc["seed"] = c.seed;
  doc["exact_oracle"] = c.exact_oracle;
  doc["output_dir"] = c.output_dir;
  doc["safety"] = c.safety;
  doc["trials_cap"] = c.trials_cap;
  doc["estimator"] =
      c.mode == EstimatorMode::Exhaustive ? "exhaustive" : "sampled";
  if (c.L_override) doc["L"] = *c.L_override;
  doc["omega_max_L"] = c.omega_max_L;
  doc["workers"] = c.workers;
  return doc.dump(2);
}

bool ExperimentResult::all_asserted_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) {
    return !c.asserted || c.pass;
  });
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ChaoticCircuit circuit =
      config.circuit_file.empty()
          ? generate_random_circuit(config.circuit)
          : circuit_from_json(read_file(config.circuit_file));
  const int n = circuit.n();
  const int m = circuit.m();
  const int width = n + m;
  if (width > kMaxBits) {
    throw Error(ErrorCode::Config, "n + m must be <= 64");
  }
  if (config.exact_oracle && width > kJointTableLimit) {
    throw Error(ErrorCode::Config,
                fmt::format("exact_oracle needs n + m <= {}", kJointTableLimit));
  }
  const IqpEncoding encoding = encode(circuit);

  std::optional<ProbDist> noisy_joint;
  std::optional<FourierTable> noisy_spectrum;
  double alpha = 0.0;
  if (config.exact_oracle) {
    const ProbDist joint = full_iqp_distribution(encoding);
    if (!config.alpha_chaos) {
      double sum_sq = 0.0;
      for (double v : joint.values) sum_sq += v * v;
      alpha = std::ldexp(sum_sq, width);
    }
    noisy_joint = apply_spectral_noise(joint, config.epsilon);
    noisy_spectrum = full_spectrum(*noisy_joint);
  } else if (!config.alpha_chaos) {
    const std::uint64_t count =
        config.variant_sample_count == 0 ? 256 : config.variant_sample_count;
    alpha = std::ldexp(second_moment_ensemble_average(circuit, count,
                                                      config.seed),
                       n);
  }
  if (config.alpha_chaos) alpha = *config.alpha_chaos;

  ExperimentResult r;
  r.name = config.name;
  r.n = n;
  r.m = m;
  r.k = config.k;
  r.alpha_chaos = alpha;
  r.alpha_measured = !config.alpha_chaos.has_value();
  r.params = resolve_params(config, alpha, width, r.t_run_theory);
  r.coefficient_count = truncated_entry_count(width, r.params.L);

  BuildOptions build;
  build.workers = config.workers;
  const TruncatedSpectrum spectrum =
      build_truncated_spectrum(encoding, r.params, build);
  std::optional<ProbDist> p_cl_joint_table;
  if (width <= kJointTableLimit) p_cl_joint_table = p_cl_dense(spectrum);

  const std::vector<Bits> labels = choose_variants(config, m);
  const double kd = config.k * config.delta;
  const std::size_t outcomes = std::size_t{1} << n;
  r.variants.reserve(labels.size());
  for (std::size_t idx = 0; idx < labels.size(); ++idx) {
    const VariantLabel label{labels[idx], m};
    const ProbDist p_qc = statevector_probs(circuit, label);
    const ProbDist p_exp =
        noisy_joint ? conditional_slice(*noisy_joint, label.bits)
                    : noisy_channel_distribution(circuit, label, config.epsilon);
    const PrefixMarginals marginals(spectrum, label);
    std::vector<double> p_cl(outcomes);
    if (p_cl_joint_table) {
      p_cl = conditional_slice(*p_cl_joint_table, label.bits).values;
    } else {
      for (std::size_t x = 0; x < outcomes; ++x) p_cl[x] = marginals(x, n);
    }

    VariantRecord v;
    v.label = label.bits;
    v.normalization = marginals(0, 0);
    v.lambda = l1_distance(p_cl, p_exp.values);
    try {
      v.delta_S = delta_quantities(p_exp.values, p_cl, p_qc.values).delta_S;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InfiniteEntropy) throw;
      v.delta_S = std::numeric_limits<double>::infinity();
    }
    for (double p : p_qc.values) v.second_moment += p * p;
    v.precondition = v.lambda <= kd;
    if (n <= kWalkAnalyticLimit) {
      try {
        const ProbDist alg = walk_distribution_analytic(spectrum, label);
        const double s = v.normalization;
        std::vector<double> math(outcomes);
        double negative = 0.0;
        double excess = -std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < outcomes; ++x) {
          math[x] = p_cl[x] / s;
          if (p_cl[x] < 0.0) negative -= p_cl[x];
          if (alg.values[x] > 0.0) {
            excess = std::max(excess, alg.values[x] - math[x]);
          }
        }
        v.walk_ok = true;
        v.walk_l1 = l1_distance(alg.values, p_exp.values);
        v.walk_math_gap = l1_distance(math, alg.values);
        v.walk_negative_mass = 2.0 * negative / s;
        v.dominance_excess = excess;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BothBranchesNonpositive &&
            e.code() != ErrorCode::NonpositiveNormalization) {
          throw;
        }
        v.walk_error = e.what();
      }
    }
    if (idx < config.sampled_variants && config.sample_count > 0 &&
        v.normalization > 0.0) {
      const std::uint64_t walk_seed =
          config.seed ^ (0x9E3779B97F4A7C15ULL * (idx + 1));
      try {
        const SampleBatch batch = sample(spectrum, label, config.sample_count,
                                         walk_seed, config.workers);
        r.sample_histograms.push_back(histogram_to_csv(batch));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BothBranchesNonpositive) throw;
        v.walk_error = e.what();
      }
    }
    for (double p : p_qc.values) {
      r.porter_thomas_values.push_back(static_cast<double>(outcomes) * p);
    }
    r.variants.push_back(std::move(v));
  }

  // aggregates
  const double count = static_cast<double>(r.variants.size());
  std::size_t walk_failures = 0;
  double dominance = -std::numeric_limits<double>::infinity();
  double identity_gap = 0.0;
  double tight_gap = -std::numeric_limits<double>::infinity();
  double worst_walk_l1 = 0.0;
  bool any_precondition = false;
  bool any_walk = false;
  for (const VariantRecord& v : r.variants) {
    r.lambda_av += v.lambda / count;
    r.e_delta += v.delta_S / count;
    r.lambda_max = std::max(r.lambda_max, v.lambda);
    if (!v.walk_error.empty()) ++walk_failures;
    if (!v.walk_ok) continue;
    any_walk = true;
    dominance = std::max(dominance, v.dominance_excess);
    identity_gap =
        std::max(identity_gap, std::abs(v.walk_math_gap - v.walk_negative_mass));
    if (v.precondition) {
      any_precondition = true;
      worst_walk_l1 = std::max(worst_walk_l1, v.walk_l1);
      if (v.lambda < 1.0) {
        tight_gap = std::max(tight_gap,
                             v.walk_l1 - 4.0 * v.lambda / (1.0 - v.lambda));
      }
      r.normalization_gap_max =
          std::max(r.normalization_gap_max, std::abs(1.0 - v.normalization));
    }
  }
  std::size_t tail = 0;
  for (const VariantRecord& v : r.variants) {
    if (std::abs(v.lambda - r.lambda_av) >= kd) ++tail;
  }
  r.chebyshev_fraction = r.variants.empty() ? 0.0 : tail / count;

  if (noisy_spectrum) {
    const OmegaSplit split = omega_split(spectrum, *noisy_spectrum);
    r.omega1 = split.omega1;
    r.omega2 = split.omega2;
    r.omega2_curve = omega2_curve(*noisy_spectrum, config.omega_max_L);
  }
  if (!r.porter_thomas_values.empty()) {
    r.porter_thomas_ks = exponential_ks(r.porter_thomas_values);
    double total = 0.0;
    bool finite = true;
    for (double u : r.porter_thomas_values) {
      if (!(u > 0.0)) {
        finite = false;
        break;
      }
      const double l = std::log(u / static_cast<double>(outcomes));
      total += l * l;
    }
    r.log_square_mean =
        finite ? total / static_cast<double>(r.porter_thomas_values.size())
               : std::numeric_limits<double>::infinity();
  }

  if (!r.variants.empty()) {
    add_check(r, "lambda_av", r.lambda_av, kLambdaFactor * config.delta);
    add_check(r, "chebyshev_fraction", r.chebyshev_fraction,
              chebyshev_tail(config.k) + kChebyshevSlack);
    add_check(r, "e_delta", r.e_delta,
              e_delta_bound(kLambdaFactor * config.delta, n));
    add_check(r, "walk_failures", static_cast<double>(walk_failures), 0.0);
  }
  if (any_walk) {
    add_check(r, "sampler_dominance", dominance, kDominanceTolerance);
    add_check(r, "sampler_negative_mass_identity", identity_gap,
              kIdentityTolerance);
  }
  if (any_precondition) {
    add_check(r, "sampler_l1_bound", worst_walk_l1, sampler_bound(1.0, kd));
    add_check(r, "sampler_l1_bound_measured_lambda", tight_gap,
              kDominanceTolerance);
    add_check(r, "normalization_window", r.normalization_gap_max, kd);
  }
  if (r.omega1) {
    add_check(r, "omega1", *r.omega1, config.delta * config.delta, false);
    const double decay = std::pow(1.0 - config.epsilon, 2 * r.params.L);
    add_check(r, "omega2", *r.omega2, alpha * decay);
    for (std::size_t L = 0; L < r.omega2_curve.size(); ++L) {
      add_check(r, fmt::format("omega2_curve_L{}", L), r.omega2_curve[L],
                alpha * std::pow(1.0 - config.epsilon, 2.0 * L));
    }
  }
  if (!config.output_dir.empty()) {
    write_result(r, config.output_dir);
    emit_plot_data(r, config.output_dir);
  }
  return r;
}

std::string result_to_json(const ExperimentResult& r) {
  Json doc;
  doc["name"] = r.name;
  doc["n"] = r.n;
  doc["m"] = r.m;
  doc["params"] = {
      {"delta", r.params.delta},
      {"epsilon", r.params.epsilon},
      {"alpha_chaos", r.params.alpha_chaos},
      {"L", r.params.L},
      {"eta", r.params.eta},
      {"t_run", r.params.t_run},
      {"t_run_theory", r.t_run_theory == 0 ? Json(nullptr) : Json(r.t_run_theory)},
      {"seed", r.params.seed},
      {"estimator",
       r.params.mode == EstimatorMode::Exhaustive ? "exhaustive" : "sampled"}};
  doc["k"] = r.k;
  doc["alpha_measured"] = r.alpha_measured;
  doc["coefficient_count"] = r.coefficient_count;
  Json agg;
  agg["variant_count"] = r.variants.size();
  agg["lambda_av"] = r.lambda_av;
  agg["lambda_max"] = r.lambda_max;
  agg["e_delta"] = number_or_null(r.e_delta);
  agg["omega1"] = r.omega1 ? Json(*r.omega1) : Json(nullptr);
  agg["omega2"] = r.omega2 ? Json(*r.omega2) : Json(nullptr);
  agg["omega2_curve"] = r.omega2_curve;
  agg["chebyshev_fraction"] = r.chebyshev_fraction;
  agg["normalization_gap_max"] = r.normalization_gap_max;
  agg["porter_thomas_ks"] = r.porter_thomas_ks;
  agg["log_square_mean"] = number_or_null(r.log_square_mean);
  doc["aggregates"] = agg;
  Json checks = Json::array();
  for (const BoundCheck& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"value", number_or_null(c.value)},
                      {"bound", number_or_null(c.bound)},
                      {"pass", c.pass},
                      {"asserted", c.asserted}});
  }
  doc["checks"] = checks;
  doc["all_asserted_pass"] = r.all_asserted_pass();
  Json variants = Json::array();
  for (const VariantRecord& v : r.variants) {
    Json item;
    item["x_prime"] = bits_to_string(v.label, r.m);
    item["lambda"] = v.lambda;
    item["delta_S"] = number_or_null(v.delta_S);
    item["S"] = v.normalization;
    item["R"] = v.second_moment;
    if (v.walk_ok) {
      item["walk_l1"] = v.walk_l1;
      item["dominance_excess"] = v.dominance_excess;
    }
    if (!v.walk_error.empty()) item["walk_error"] = v.walk_error;
    variants.push_back(std::move(item));
  }
  doc["variants"] = variants;
  return doc.dump(2) + "\n";
}

std::string variants_to_csv(const ExperimentResult& r) {
  std::string out =
      "x_prime,lambda,delta_S,S,R,precondition,walk_ok,walk_l1,"
      "walk_math_gap,walk_negative_mass,dominance_excess\n";
  for (const VariantRecord& v : r.variants) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g},"
                       "{:.17g},{:.17g},{:.17g}\n",
                       bits_to_string(v.label, r.m), v.lambda, v.delta_S,
                       v.normalization, v.second_moment, int(v.precondition),
                       int(v.walk_ok), v.walk_l1, v.walk_math_gap,
                       v.walk_negative_mass, v.dominance_excess);
  }
  return out;
}

void write_result(const ExperimentResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_file(base / "result.json", result_to_json(result));
  write_file(base / "variants.csv", variants_to_csv(result));
  for (std::size_t i = 0; i < result.sample_histograms.size(); ++i) {
    write_file(base / fmt::format("samples_{}.csv", i),
               result.sample_histograms[i]);
  }
}

void emit_plot_data(const ExperimentResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  const double delta = result.params.delta;

  std::string tail = "k,empirical_fraction,chebyshev_bound\n";
  if (!result.variants.empty()) {
    for (int step = 1; step <= 20; ++step) {
      const double k = 0.25 * step;
      std::size_t hits = 0;
      for (const VariantRecord& v : result.variants) {
        if (std::abs(v.lambda - result.lambda_av) >= k * delta) ++hits;
      }
      tail += fmt::format("{:.17g},{:.17g},{:.17g}\n", k,
                          static_cast<double>(hits) / result.variants.size(),
                          chebyshev_tail(k));
    }
  }
  write_file(base / "lambda_tail.csv", tail);

  std::string lambdas = "x_prime,lambda\n";
  for (const VariantRecord& v : result.variants) {
    lambdas += fmt::format("{},{:.17g}\n", bits_to_string(v.label, result.m),
                           v.lambda);
  }
  write_file(base / "lambda_values.csv", lambdas);

  std::string curve = "L,omega2,bound\n";
  const int max_L = result.omega2_curve.empty()
                        ? result.params.L
                        : static_cast<int>(result.omega2_curve.size()) - 1;
  for (int L = 0; L <= max_L; ++L) {
    const double bound = result.alpha_chaos *
                         std::pow(1.0 - result.params.epsilon, 2.0 * L);
    if (result.omega2_curve.empty()) {
      curve += fmt::format("{},,{:.17g}\n", L, bound);
    } else {
      curve += fmt::format("{},{:.17g},{:.17g}\n", L, result.omega2_curve[L],
                           bound);
    }
  }
  write_file(base / "omega2_curve.csv", curve);

  std::string pt = "u_lo,u_hi,empirical_density,porter_thomas_density\n";
  if (!result.porter_thomas_values.empty()) {
    const double width = kPlotMaxU / kPlotBins;
    std::vector<std::size_t> bins(kPlotBins, 0);
    for (double u : result.porter_thomas_values) {
      const auto b = static_cast<std::size_t>(u / width);
      if (b < bins.size()) ++bins[b];
    }
    const double total = static_cast<double>(result.porter_thomas_values.size());
    for (int b = 0; b < kPlotBins; ++b) {
      const double lo = b * width;
      const double hi = lo + width;
      pt += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", lo, hi,
                        bins[b] / (total * width),
                        (std::exp(-lo) - std::exp(-hi)) / width);
    }
  }
  write_file(base / "porter_thomas.csv", pt);
}

ExperimentConfig preset_config(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  if (name == "desk-bound-check") {
    c.circuit = {4, 3, 1};
    c.epsilon = 0.25;
    c.delta = 0.3;
    c.k = 2.0;
    c.trials_cap = 4096;
    c.seed = 1;
    return c;
  }
  if (name == "sampler-bound-check") {
    c.circuit = {4, 3, 2};
    c.epsilon = 0.25;
    c.delta = 0.3;
    c.k = 1.5;
    c.trials_cap = 4096;
    c.seed = 2;
    c.sampled_variants = 4;
    return c;
  }
  if (name == "noise-free-exhaustive") {
    c.circuit = {3, 2, 5};
    c.epsilon = 0.0;
    c.delta = 0.3;
    c.k = 2.0;
    c.mode = EstimatorMode::Exhaustive;
    c.seed = 5;
    return c;
  }
  throw Error(ErrorCode::Config, "unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"desk-bound-check", "sampler-bound-check", "noise-free-exhaustive"};
}

}  // namespace iqpnoise
