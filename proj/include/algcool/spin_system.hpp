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

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace algcool {

/// One nuclear spin of the molecule model.
///
/// `gamma_rel` is the gyromagnetic ratio relative to the reference spin, so the
/// equilibrium polarization of this spin is `gamma_rel` in units of `eps_unit`.
/// `t2star` is carried for reference only; diagonal dynamics never use it.
struct Spin {
  std::string name;
  double gamma_rel = 1.0;
  double t1 = 1.0;      // seconds
  double t2star = 1.0;  // seconds
  std::string rf_channel;
};

/// An ordered set of spins plus the reference polarization scale.
///
/// Spin i of the system corresponds to bit (n-1-i) of a basis index, i.e. the
/// first spin is the most significant bit. Bit value 0 is the aligned ("up") state.
class SpinSystem {
 public:
  static constexpr std::size_t kMaxSpins = 16;
  static constexpr double kDefaultEpsUnit = 1e-5;

  SpinSystem(std::vector<Spin> spins, double eps_unit = kDefaultEpsUnit, std::string label = {});

  std::size_t size() const { return spins_.size(); }
  std::size_t dimension() const { return std::size_t{1} << spins_.size(); }
  double eps_unit() const { return eps_unit_; }
  const std::string& label() const { return label_; }
  const std::vector<Spin>& spins() const { return spins_; }
  const Spin& spin(std::size_t i) const { return spins_.at(i); }

  /// Index of the named spin; throws LookupError when absent.
  std::size_t index_of(const std::string& name) const;
  bool contains(const std::string& name) const;

  /// Bit mask selecting spin i in a basis index.
  std::uint32_t mask_of(std::size_t i) const {
    return std::uint32_t{1} << (spins_.size() - 1 - i);
  }

  /// Equilibrium polarizations in eps_unit units (= gamma_rel of each spin).
  std::vector<double> equilibrium_polarizations() const;

  bool operator==(const SpinSystem& other) const;

 private:
  std::vector<Spin> spins_;
  double eps_unit_;
  std::string label_;
};

using SpinSystemPtr = std::shared_ptr<const SpinSystem>;

/// Traceless diagonal in eps_unit units: d_x = (2^n p_x - 1) / eps_unit.
struct DeviationDiagonal {
  std::vector<double> values;
};

/// Diagonal density matrix of an n-spin ensemble.
///
/// Stored as the excess over the maximally mixed state, p_x = 2^-n + excess_x,
/// which keeps marginals and entropies accurate when eps_unit is ~1e-5.
class DiagonalState {
 public:
  /// Validates sum(excess) = 0 within 1e-12 and p_x >= -1e-15 (tiny negatives clamped to 0).
  DiagonalState(SpinSystemPtr system, std::vector<double> excess);

  static DiagonalState from_populations(SpinSystemPtr system, std::span<const double> populations);
  static DiagonalState uniform(SpinSystemPtr system);

  const SpinSystem& system() const { return *system_; }
  const SpinSystemPtr& system_ptr() const { return system_; }
  std::size_t dimension() const { return excess_.size(); }

  const std::vector<double>& excess() const { return excess_; }
  double population(std::size_t x) const { return base() + excess_[x]; }
  std::vector<double> populations() const;
  double base() const { return 1.0 / static_cast<double>(excess_.size()); }

 private:
  SpinSystemPtr system_;
  std::vector<double> excess_;
};

/// 13C2-trichloroethylene: H, C2, C1 with measured T1/T2* and gamma ratio 3.98.
SpinSystemPtr make_tce_system(double eps_unit = SpinSystem::kDefaultEpsUnit);

/// Product state with the given per-spin polarizations (eps_unit units).
DiagonalState build_product_state(SpinSystemPtr system, std::span<const double> pols);

/// Thermal equilibrium: product state with polarizations gamma_rel.
DiagonalState equilibrium_state(SpinSystemPtr system);

/// (P_up - P_down) of one spin, in eps_unit units.
double marginal_polarization(const DiagonalState& state, const std::string& spin);
double marginal_polarization(const DiagonalState& state, std::size_t spin_index);
std::vector<double> marginal_polarizations(const DiagonalState& state);

DeviationDiagonal deviation_diagonal(const DiagonalState& state);
DiagonalState state_from_deviation(SpinSystemPtr system, const DeviationDiagonal& deviation);

/// Leading-order deviation of a product state: d_x = sum_i s_i(x) pol_i.
DeviationDiagonal leading_order_deviation(std::size_t n_spins, std::span<const double> pols);

/// +1 when spin `i` of `n` is up (bit 0) in basis index x, else -1.
inline int spin_sign(std::uint32_t x, std::size_t i, std::size_t n) {
  return ((x >> (n - 1 - i)) & 1U) ? -1 : 1;
}

}  // namespace algcool
