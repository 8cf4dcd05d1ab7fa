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

#include <string>
#include <vector>

namespace iqpnoise {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned workers = 1;
  /// Safety multiplier handed to choose_params by the estimator criterion.
  /// 4 = (b - a)^2 for summands in [-1, 1].
  double estimator_safety = 4.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs criterion `id` (1..10). Results of the shared desk-scale ensemble are
/// cached for the lifetime of the process.
CriterionResult run_criterion(int id, const AcceptanceOptions& options = {});

/// "[PASS] 3 estimator accuracy: ... (1.2 s)"
std::string format_criterion(const CriterionResult& result);

}  // namespace iqpnoise
