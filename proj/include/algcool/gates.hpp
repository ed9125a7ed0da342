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

#include <cstdint>
#include <string>
#include <vector>

#include "algcool/spin_system.hpp"

namespace algcool {

/// A reversible gate on diagonal states: a permutation of basis indices.
///
/// Basis index x is sent to permutation()[x], i.e. p_out[perm[x]] = p_in[x].
class Gate {
 public:
  /// Throws ParameterError unless `permutation` is a bijection on {0..2^n-1}.
  Gate(SpinSystemPtr system, std::vector<std::uint32_t> permutation, std::string label,
       std::vector<std::string> involved_spins);

  const std::vector<std::uint32_t>& permutation() const { return permutation_; }
  const std::string& label() const { return label_; }
  const std::vector<std::string>& involved_spins() const { return involved_; }
  const SpinSystem& system() const { return *system_; }
  const SpinSystemPtr& system_ptr() const { return system_; }

  /// Bit mask covering every involved spin.
  std::uint32_t involved_mask() const;

  Gate inverse() const;
  /// `then` applied after *this.
  Gate then(const Gate& next) const;
  bool is_identity() const;

  bool operator==(const Gate& other) const {
    return permutation_ == other.permutation_ && involved_ == other.involved_;
  }

 private:
  SpinSystemPtr system_;
  std::vector<std::uint32_t> permutation_;
  std::string label_;
  std::vector<std::string> involved_;
};

/// Polarization exchange of spins a and b: swaps their bits in every basis index.
Gate pe(SpinSystemPtr system, const std::string& a, const std::string& b);

/// 3-bit compression onto `target`: transposes the basis states whose
/// (target, a, b) bits read 011 and 100. Ideal gain (e_t + e_a + e_b) / 2 at leading order.
Gate comp(SpinSystemPtr system, const std::string& target, const std::string& a, const std::string& b);

/// Which spins an imperfect gate depolarizes.
enum class DepolarizationScope {
  involved,  // only the gate's own spins are mixed toward uniform
  global,    // the whole register is mixed toward the uniform distribution
};

/// Per-role gate efficiencies.
struct GateModel {
  double eta_pe = 1.0;
  double eta_comp = 1.0;
  DepolarizationScope scope = DepolarizationScope::involved;

  static GateModel ideal() { return {}; }
  void validate() const;
};

/// Apply `gate` with efficiency `eta`:
///   p_out = eta * P(p) + (1 - eta) * D(P(p))
/// where P is the permutation and D replaces the scoped spins by a uniform
/// distribution (keeping the marginal of everything else). eta = 1 is the exact permutation.
DiagonalState apply(const Gate& gate, const DiagonalState& state, double eta = 1.0,
                    DepolarizationScope scope = DepolarizationScope::involved);

}  // namespace algcool
