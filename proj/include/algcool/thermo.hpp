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

#include <string>
#include <utility>
#include <vector>

#include "algcool/spin_system.hpp"

namespace algcool::thermo {

inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K

struct PhysicalConditions {
  double gamma_abs;    // rad s^-1 T^-1
  double b_field;      // T
  double temperature;  // K
};

/// tanh(hbar gamma B / 2 k_B T).
double equilibrium_polarization(const PhysicalConditions& cond);

/// Temperature at which `eps` would be the (linearized) equilibrium polarization.
double spin_temperature(double eps, const PhysicalConditions& cond);

struct SingleIc {
  double exact_bits;     // 1 - H2((1 + eps) / 2)
  double leading_order;  // eps^2 / ln 4
};

SingleIc ic_single(double eps);

struct IcReport {
  std::vector<std::pair<std::string, double>> per_spin_ic;  // pol^2, in eps_unit^2 / ln4
  double total_ic_leading = 0.0;
  double exact_ic_bits = 0.0;  // n - H(p), bits
  static constexpr const char* units = "eps_unit^2/ln4";
};

IcReport ic_report(const DiagonalState& state);

/// Shannon entropy of the full population vector, in bits.
double shannon_entropy_bits(const DiagonalState& state);

/// Leading-order entropy bound: sqrt(total IC) in eps_unit units.
double entropy_bound_max_pol(double total_ic);

/// Exact inversion of 1 - H2((1 + eps) / 2) = ic_bits for eps in [0, 1].
/// Returns an absolute polarization (not in eps_unit units).
double entropy_bound_max_pol_exact(double ic_bits);

/// Largest marginal polarization of `target` reachable by permuting populations.
double sort_bound(const DiagonalState& state, const std::string& target);
double sort_bound(const DiagonalState& state, std::size_t target_index);

}  // namespace algcool::thermo
