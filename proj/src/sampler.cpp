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

#include "iqpnoise/sampler.hpp"

#include <cmath>
#include <functional>

#include <fmt/format.h>

#include "iqpnoise/error.hpp"
#include "iqpnoise/parallel.hpp"
#include "iqpnoise/rng.hpp"

namespace iqpnoise {

namespace {

constexpr double kConsistencyTolerance = 1e-9;

using Marginal = std::function<double(Bits, int)>;

struct Children {
  double zero;
  double one;
};

Children children_of(const Marginal& marginal, Bits prefix, int k) {
  const Children c{marginal(prefix, k + 1),
                   marginal(prefix | (Bits{1} << k), k + 1)};
  const double parent = marginal(prefix, k);
  const double gap = std::abs(c.zero + c.one - parent);
  if (gap > kConsistencyTolerance *
                (1.0 + std::abs(c.zero) + std::abs(c.one))) {
    throw Error(ErrorCode::BadRange,
                fmt::format("p(z0) + p(z1) misses p(z) by {:.3e}", gap));
  }
  return c;
}

[[noreturn]] void both_nonpositive(Bits prefix, int k, const Children& c) {
  throw Error(ErrorCode::BothBranchesNonpositive,
              fmt::format("prefix '{}': p(z0) = {:.17g}, p(z1) = {:.17g}",
                          bits_to_string(prefix, k), c.zero, c.one));
}

WalkState step_with(const Marginal& marginal, int n, const WalkState& state,
                    double u) {
  if (state.length < 0 || state.length >= n) {
    throw Error(ErrorCode::BadRange, "walk is already complete");
  }
  if (!(state.pseudo_prob > 0.0)) {
    throw Error(ErrorCode::BadRange, "walk state has nonpositive mass");
  }
  const int k = state.length;
  const Children c = children_of(marginal, state.prefix, k);
  const Bits one = state.prefix | (Bits{1} << k);
  if (c.zero > 0.0 && c.one > 0.0) {
    if (u < c.zero / (c.zero + c.one)) {
      return {state.prefix, k + 1, c.zero};
    }
    return {one, k + 1, c.one};
  }
  if (c.zero > 0.0) return {state.prefix, k + 1, state.pseudo_prob};
  if (c.one > 0.0) return {one, k + 1, state.pseudo_prob};
  both_nonpositive(state.prefix, k, c);
}

ProbDist analytic_walk(const Marginal& marginal, int n) {
  if (n < 1 || n > kWalkAnalyticLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("analytic walk limited to 1 <= n <= {}",
                            kWalkAnalyticLimit));
  }
  const double total = marginal(0, 0);
  if (!(total > 0.0)) {
    throw Error(ErrorCode::NonpositiveNormalization,
                fmt::format("S = {:.17g}", total));
  }
  ProbDist out{n, 0, DistKind::ExactNormalized,
               std::vector<double>(std::size_t{1} << n, 0.0)};
  std::function<void(Bits, int, double)> descend = [&](Bits prefix, int k,
                                                       double mass) {
    if (k == n) {
      out.values[prefix] = mass;
      return;
    }
    const Children c = children_of(marginal, prefix, k);
    const Bits one = prefix | (Bits{1} << k);
    if (c.zero > 0.0 && c.one > 0.0) {
      const double sum = c.zero + c.one;
      descend(prefix, k + 1, mass * (c.zero / sum));
      descend(one, k + 1, mass * (c.one / sum));
    } else if (c.zero > 0.0) {
      descend(prefix, k + 1, mass);
    } else if (c.one > 0.0) {
      descend(one, k + 1, mass);
    } else {
      both_nonpositive(prefix, k, c);
    }
  };
  descend(0, 0, 1.0);
  return out;
}

Marginal marginal_of(const PrefixMarginals& marginals) {
  return [&marginals](Bits prefix, int k) { return marginals(prefix, k); };
}

}  // namespace

PrefixMarginals::PrefixMarginals(const TruncatedSpectrum& spectrum,
                                 const VariantLabel& label)
    : n_(spectrum.n()),
      m_(spectrum.m()),
      entries_by_reach_(static_cast<std::size_t>(spectrum.n()) + 1) {
  if (label.length != m_) {
    throw Error(ErrorCode::LengthMismatch,
                fmt::format("variant label has length {}, spectrum has m = {}",
                            label.length, m_));
  }
  std::map<Bits, double> folded;
  const Bits system = low_mask(n_);
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const Bits mask = spectrum.masks()[i];
    const double signed_value = sign_of(mask >> n_, label.bits) *
                                spectrum.values()[i];
    folded[mask & system] += signed_value;
  }
  for (const auto& [s, value] : folded) {
    const int reach = s == 0 ? 0 : kMaxBits - std::countl_zero(s);
    entries_by_reach_[reach].emplace_back(s, value);
  }
}

double PrefixMarginals::operator()(Bits prefix, int k) const {
  if (k < 0 || k > n_) {
    throw Error(ErrorCode::BadRange,
                fmt::format("prefix length {} outside [0, {}]", k, n_));
  }
  double total = 0.0;
  for (int r = 0; r <= k; ++r) {
    for (const auto& [s, value] : entries_by_reach_[r]) {
      total += parity(s & prefix) ? -value : value;
    }
  }
  return std::ldexp(total, m_ + n_ - k);
}

double prefix_marginal(const TruncatedSpectrum& spectrum,
                       const VariantLabel& label, Bits prefix, int k) {
  return PrefixMarginals(spectrum, label)(prefix, k);
}

WalkState walk_step(const PrefixMarginals& marginals, const WalkState& state,
                    double u) {
  return step_with(marginal_of(marginals), marginals.n(), state, u);
}

WalkState walk_step(const TruncatedSpectrum& spectrum,
                    const VariantLabel& label, const WalkState& state,
                    double u) {
  return walk_step(PrefixMarginals(spectrum, label), state, u);
}

SampleBatch sample(const TruncatedSpectrum& spectrum,
                   const VariantLabel& label, std::uint64_t count,
                   std::uint64_t seed, unsigned workers) {
  const PrefixMarginals marginals(spectrum, label);
  const int n = spectrum.n();
  SampleBatch batch{n, label, seed, marginals(0, 0), {}, {}};
  if (!(batch.normalization > 0.0)) {
    throw Error(ErrorCode::NonpositiveNormalization,
                fmt::format("S = {:.17g}", batch.normalization));
  }
  batch.samples.resize(count);
  const Marginal marginal = marginal_of(marginals);
  parallel_for(count, workers, [&](std::size_t w) {
    Philox rng = make_stream(seed, StreamDomain::Walk, w);
    WalkState state{0, 0, batch.normalization};
    while (state.length < n) {
      state = step_with(marginal, n, state, rng.uniform());
    }
    batch.samples[w] = state.prefix;
  });
  for (Bits x : batch.samples) ++batch.counts[x];
  return batch;
}

ProbDist walk_distribution_analytic(const TruncatedSpectrum& spectrum,
                                    const VariantLabel& label) {
  if (spectrum.n() > kWalkAnalyticLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("analytic walk limited to n <= {}",
                            kWalkAnalyticLimit));
  }
  const PrefixMarginals marginals(spectrum, label);
  return analytic_walk(marginal_of(marginals), spectrum.n());
}

ProbDist walk_distribution_analytic(const std::vector<double>& signed_probs,
                                    int n) {
  if (n < 1 || n > kWalkAnalyticLimit) {
    throw Error(ErrorCode::TooLarge,
                fmt::format("analytic walk limited to 1 <= n <= {}",
                            kWalkAnalyticLimit));
  }
  if (signed_probs.size() != (std::size_t{1} << n)) {
    throw Error(ErrorCode::LengthMismatch, "signed vector length is not 2^n");
  }
  // levels[k][prefix] = sum of p over all completions of a k-bit prefix
  std::vector<std::vector<double>> levels(static_cast<std::size_t>(n) + 1);
  levels[n] = signed_probs;
  for (int k = n - 1; k >= 0; --k) {
    levels[k].resize(std::size_t{1} << k);
    const Bits bit = Bits{1} << k;
    for (Bits prefix = 0; prefix < levels[k].size(); ++prefix) {
      levels[k][prefix] = levels[k + 1][prefix] + levels[k + 1][prefix | bit];
    }
  }
  return analytic_walk(
      [&levels](Bits prefix, int k) { return levels[k][prefix]; }, n);
}

std::string samples_to_text(const SampleBatch& batch) {
  std::string out;
  out.reserve(batch.samples.size() * (static_cast<std::size_t>(batch.n) + 1));
  for (Bits x : batch.samples) {
    out += bits_to_string(x, batch.n);
    out += '\n';
  }
  return out;
}

std::string histogram_to_csv(const SampleBatch& batch) {
  std::string out = "outcome,count\n";
  for (const auto& [x, c] : batch.counts) {
    out += fmt::format("{},{}\n", bits_to_string(x, batch.n), c);
  }
  return out;
}

std::string batch_metadata_json(const SampleBatch& batch) {
  return fmt::format(
      "{{\"x_prime\": \"{}\", \"seed\": {}, \"count\": {}, \"S\": {:.17g}}}",
      batch.label.to_string(), batch.seed, batch.samples.size(),
      batch.normalization);
}

}  // namespace iqpnoise
