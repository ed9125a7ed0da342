// Copyright 2026 The algcool Authors
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

#include <array>
#include <vector>

#include "algcool/spin_system.hpp"

namespace algcool {

/// Per-spin T1 channel for a fixed duration.
///
/// Spin i relaxes as eps_i(t) = eq_i + (eps_i(0) - eq_i) * decay_i, decay_i = exp(-t / T1_i).
/// The full map is the tensor product of the per-spin 2x2 maps.
struct RelaxationChannel {
  std::vector<double> decay;
  std::vector<double> eq_pol;  // eps_unit units
  double eps_unit = 0.0;

  static RelaxationChannel for_duration(const SpinSystem& system, double t);

  /// Column-stochastic map of spin i: m[to][from], index 0 = up.
  std::array<std::array<double, 2>, 2> stochastic_matrix(std::size_t i) const;
};

/// Evolve `state` under T1 relaxation for `t` seconds (OpenMP over basis pairs for large registers).
DiagonalState relax(const DiagonalState& state, double t);

/// Single-threaded reference of relax(); kept for cross-checking the parallel kernel.
DiagonalState relax_serial(const DiagonalState& state, double t);

}  // namespace algcool
