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

#include <catch_amalgamated.hpp>
#include <complex>
#include <vector>

#include "iqpnoise/circuit.hpp"
#include "iqpnoise/error.hpp"

namespace iqpnoise::testing {

template <typename Fn>
ErrorCode thrown_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected iqpnoise::Error");
  return ErrorCode::Io;
}

#define REQUIRE_ERROR(expr, code) \
  REQUIRE(::iqpnoise::testing::thrown_code([&] { (void)(expr); }) == (code))

using Complex = std::complex<double>;
using Dense = std::vector<Complex>;  // row-major, dim x dim

/// Reference state-vector simulator built from dense Kronecker-product
/// matrices; independent of the library's bitwise kernels.
inline Dense kron_apply_1q(const Matrix2& u, int wire, int n,
                           const Dense& state) {
  const std::size_t dim = std::size_t{1} << n;
  Dense out(dim, 0.0);
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t col = 0; col < dim; ++col) {
      Complex entry = 1.0;
      for (int q = 0; q < n; ++q) {
        const int r = (row >> q) & 1;
        const int c = (col >> q) & 1;
        if (q == wire) {
          entry *= u[2 * r + c];
        } else if (r != c) {
          entry = 0.0;
          break;
        }
      }
      out[row] += entry * state[col];
    }
  }
  return out;
}

inline std::vector<double> reference_probs(const ChaoticCircuit& circuit,
                                           Bits label) {
  const int n = circuit.n();
  const std::size_t dim = std::size_t{1} << n;
  const double h = 1.0 / std::sqrt(2.0);
  const Matrix2 hadamard{h, h, h, -h};
  const Matrix2 pauli_x{0.0, 1.0, 1.0, 0.0};
  Dense state(dim, std::pow(h, n));
  int j_index = 0;
  for (const Gate& g : circuit.gates()) {
    if (const auto* j = std::get_if<JGate>(&g)) {
      state = kron_apply_1q(j_matrix(j->angle.radians()), j->wire, n, state);
      const bool flip = j->flip != (((label >> j_index) & 1U) != 0);
      if (flip) state = kron_apply_1q(pauli_x, j->wire, n, state);
      ++j_index;
    } else {
      const auto& cz = std::get<CZGate>(g);
      for (std::size_t z = 0; z < dim; ++z) {
        if (((z >> cz.wire_a) & 1U) && ((z >> cz.wire_b) & 1U)) {
          state[z] = -state[z];
        }
      }
    }
  }
  for (int q = 0; q < n; ++q) state = kron_apply_1q(hadamard, q, n, state);
  std::vector<double> probs(dim);
  for (std::size_t z = 0; z < dim; ++z) probs[z] = std::norm(state[z]);
  return probs;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

}  // namespace iqpnoise::testing
