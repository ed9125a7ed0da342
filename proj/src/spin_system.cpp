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

#include "algcool/spin_system.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "algcool/errors.hpp"

namespace algcool {

SpinSystem::SpinSystem(std::vector<Spin> spins, double eps_unit, std::string label)
    : spins_(std::move(spins)), eps_unit_(eps_unit), label_(std::move(label)) {
  if (spins_.empty() || spins_.size() > kMaxSpins) {
    throw ConfigError("spin system must hold between 1 and 16 spins, got " +
                      std::to_string(spins_.size()));
  }
  if (!(eps_unit_ > 0.0 && eps_unit_ <= 0.05)) {
    throw ConfigError("eps_unit must lie in (0, 0.05]");
  }
  std::set<std::string> names;
  for (const auto& s : spins_) {
    if (s.name.empty()) throw ConfigError("spin name must not be empty");
    if (!names.insert(s.name).second) throw ConfigError("duplicate spin name '" + s.name + "'");
    if (!(s.t1 > 0.0)) throw ConfigError("spin '" + s.name + "': t1 must be positive");
    if (!(s.t2star > 0.0)) throw ConfigError("spin '" + s.name + "': t2star must be positive");
    if (s.gamma_rel == 0.0 || !std::isfinite(s.gamma_rel)) {
      throw ConfigError("spin '" + s.name + "': gamma_rel must be finite and nonzero");
    }
  }
}

std::size_t SpinSystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    if (spins_[i].name == name) return i;
  }
  throw LookupError("unknown spin '" + name + "'");
}

bool SpinSystem::contains(const std::string& name) const {
  for (const auto& s : spins_) {
    if (s.name == name) return true;
  }
  return false;
}

std::vector<double> SpinSystem::equilibrium_polarizations() const {
  std::vector<double> pols;
  pols.reserve(spins_.size());
  for (const auto& s : spins_) pols.push_back(s.gamma_rel);
  return pols;
}

bool SpinSystem::operator==(const SpinSystem& other) const {
  if (eps_unit_ != other.eps_unit_ || spins_.size() != other.spins_.size()) return false;
  for (std::size_t i = 0; i < spins_.size(); ++i) {
    const auto& a = spins_[i];
    const auto& b = other.spins_[i];
    if (a.name != b.name || a.gamma_rel != b.gamma_rel || a.t1 != b.t1) return false;
  }
  return true;
}

DiagonalState::DiagonalState(SpinSystemPtr system, std::vector<double> excess)
    : system_(std::move(system)), excess_(std::move(excess)) {
  if (!system_) throw ParameterError("state requires a spin system");
  if (excess_.size() != system_->dimension()) {
    throw ParameterError("state length " + std::to_string(excess_.size()) +
                         " does not match 2^n = " + std::to_string(system_->dimension()));
  }
  const double sum = std::accumulate(excess_.begin(), excess_.end(), 0.0);
  if (!(std::abs(sum) <= 1e-12)) {
    throw ParameterError("populations must sum to 1 (excess sums to " + std::to_string(sum) + ")");
  }
  const double b = base();
  for (auto& e : excess_) {
    const double p = b + e;
    if (p < 0.0) {
      if (p < -1e-15) throw ParameterError("negative population " + std::to_string(p));
      e = -b;
    }
  }
}

DiagonalState DiagonalState::from_populations(SpinSystemPtr system, std::span<const double> populations) {
  const double b = 1.0 / static_cast<double>(populations.size());
  std::vector<double> excess(populations.begin(), populations.end());
  for (auto& e : excess) e -= b;
  return DiagonalState(std::move(system), std::move(excess));
}

DiagonalState DiagonalState::uniform(SpinSystemPtr system) {
  const auto dim = system->dimension();
  return DiagonalState(std::move(system), std::vector<double>(dim, 0.0));
}

std::vector<double> DiagonalState::populations() const {
  std::vector<double> p(excess_);
  const double b = base();
  for (auto& v : p) v += b;
  return p;
}

SpinSystemPtr make_tce_system(double eps_unit) {
  std::vector<Spin> spins = {
      {"H", 3.98, 2.67, 0.20, "1H"},
      {"C2", 1.0, 17.3, 0.44, "13C"},
      {"C1", 1.0, 29.2, 0.23, "13C"},
  };
  return std::make_shared<const SpinSystem>(std::move(spins), eps_unit, "13C2-trichloroethylene");
}

DiagonalState build_product_state(SpinSystemPtr system, std::span<const double> pols) {
  const std::size_t n = system->size();
  if (pols.size() != n) {
    throw ParameterError("expected " + std::to_string(n) + " polarizations, got " +
                         std::to_string(pols.size()));
  }
  const double eps = system->eps_unit();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(pols[i] * eps) < 1.0)) {
      throw DomainError("polarization of spin '" + system->spin(i).name +
                        "' must satisfy |pol * eps_unit| < 1");
    }
  }
  const std::size_t dim = system->dimension();
  const double b = 1.0 / static_cast<double>(dim);
  std::vector<double> excess(dim);
  for (std::uint32_t x = 0; x < dim; ++x) {
    // q = prod_i (1 + s_i a_i) - 1, accumulated without cancellation
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = spin_sign(x, i, n) * pols[i] * eps;
      q = q + a + q * a;
    }
    excess[x] = b * q;
  }
  // exact rounding can leave ~1e-20 residue; push it onto the largest entry
  const double residue = std::accumulate(excess.begin(), excess.end(), 0.0);
  excess[0] -= residue;
  return DiagonalState(std::move(system), std::move(excess));
}

DiagonalState equilibrium_state(SpinSystemPtr system) {
  const auto pols = system->equilibrium_polarizations();
  return build_product_state(std::move(system), pols);
}

double marginal_polarization(const DiagonalState& state, std::size_t spin_index) {
  const auto& sys = state.system();
  if (spin_index >= sys.size()) throw LookupError("spin index out of range");
  const std::uint32_t mask = sys.mask_of(spin_index);
  const auto& ex = state.excess();
  double up = 0.0;
  double down = 0.0;
  for (std::uint32_t x = 0; x < ex.size(); ++x) {
    if (x & mask) {
      down += ex[x];
    } else {
      up += ex[x];
    }
  }
  return (up - down) / sys.eps_unit();
}

double marginal_polarization(const DiagonalState& state, const std::string& spin) {
  return marginal_polarization(state, state.system().index_of(spin));
}

std::vector<double> marginal_polarizations(const DiagonalState& state) {
  std::vector<double> out(state.system().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = marginal_polarization(state, i);
  return out;
}

DeviationDiagonal deviation_diagonal(const DiagonalState& state) {
  const double scale = static_cast<double>(state.dimension()) / state.system().eps_unit();
  DeviationDiagonal d;
  d.values.reserve(state.dimension());
  for (double e : state.excess()) d.values.push_back(e * scale);
  return d;
}

DiagonalState state_from_deviation(SpinSystemPtr system, const DeviationDiagonal& deviation) {
  const double sum = std::accumulate(deviation.values.begin(), deviation.values.end(), 0.0);
  if (!(std::abs(sum) <= 1e-9)) throw ParameterError("deviation diagonal must be traceless");
  const double scale = system->eps_unit() / static_cast<double>(system->dimension());
  std::vector<double> excess;
  excess.reserve(deviation.values.size());
  for (double d : deviation.values) excess.push_back(d * scale);
  return DiagonalState(std::move(system), std::move(excess));
}

DeviationDiagonal leading_order_deviation(std::size_t n_spins, std::span<const double> pols) {
  if (pols.size() != n_spins) throw ParameterError("polarization count does not match spin count");
  DeviationDiagonal d;
  const std::size_t dim = std::size_t{1} << n_spins;
  d.values.assign(dim, 0.0);
  for (std::uint32_t x = 0; x < dim; ++x) {
    for (std::size_t i = 0; i < n_spins; ++i) d.values[x] += spin_sign(x, i, n_spins) * pols[i];
  }
  return d;
}

}  // namespace algcool
