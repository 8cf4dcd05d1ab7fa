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
#include <map>
#include <string>
#include <vector>

#include "iqpnoise/bits.hpp"
#include "iqpnoise/circuit.hpp"
#include "iqpnoise/fourier_mc.hpp"
#include "iqpnoise/oracle.hpp"

namespace iqpnoise {

/// Prefix pseudo-marginals p(z_k) of P_cl(.|U_{x'}) straight from a truncated
/// spectrum. Coefficients are pre-signed by (-1)^{s'.x'} and grouped by the
/// highest system position they touch, so p(z_k) only visits entries whose
/// system support lies inside the prefix.
class PrefixMarginals {
 public:
  PrefixMarginals(const TruncatedSpectrum& spectrum, const VariantLabel& label);

  int n() const noexcept { return n_; }

  /// p(z) for the first k system bits z (bit i is x_i).
  double operator()(Bits prefix, int k) const;

 private:
  int n_;
  int m_;
  // entries_by_reach[r] holds entries whose system support is inside [0, r)
  // but not inside [0, r-1).
  std::vector<std::vector<std::pair<Bits, double>>> entries_by_reach_;
};

double prefix_marginal(const TruncatedSpectrum& spectrum,
                       const VariantLabel& label, Bits prefix, int k);

struct WalkState {
  Bits prefix = 0;
  int length = 0;
  double pseudo_prob = 0.0;
};

/// One step of the walk. Both children positive: bit 0 iff u < p(z0)/p(z).
/// Exactly one positive: that child, deterministically, keeping the parent
/// mass. Zero counts as nonpositive. Throws BothBranchesNonpositive.
WalkState walk_step(const PrefixMarginals& marginals, const WalkState& state,
                    double u);

WalkState walk_step(const TruncatedSpectrum& spectrum,
                    const VariantLabel& label, const WalkState& state,
                    double u);

struct SampleBatch {
  int n = 0;
  VariantLabel label;
  std::uint64_t seed = 0;
  double normalization = 0.0;  // S
  std::vector<Bits> samples;
  std::map<Bits, std::uint64_t> counts;
};

/// `count` independent walks, walk w drawing from substream (seed, w).
SampleBatch sample(const TruncatedSpectrum& spectrum,
                   const VariantLabel& label, std::uint64_t count,
                   std::uint64_t seed, unsigned workers = 1);

inline constexpr int kWalkAnalyticLimit = 12;

/// Exact distribution the walk induces, computed by splitting mass down the
/// binary tree with the step rule.
ProbDist walk_distribution_analytic(const TruncatedSpectrum& spectrum,
                                    const VariantLabel& label);

/// Same walk driven by an explicit signed vector p over 2^n (marginals are
/// suffix sums of p).
ProbDist walk_distribution_analytic(const std::vector<double>& signed_probs,
                                    int n);

std::string samples_to_text(const SampleBatch& batch);
std::string histogram_to_csv(const SampleBatch& batch);
std::string batch_metadata_json(const SampleBatch& batch);

}  // namespace iqpnoise
