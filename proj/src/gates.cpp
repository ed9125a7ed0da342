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

#include "algcool/gates.hpp"

#include <algorithm>
#include <bit>

#include "algcool/errors.hpp"

namespace algcool {

namespace {

std::size_t spin_index(const SpinSystem& sys, const std::string& name) {
  if (!sys.contains(name)) throw ParameterError("gate refers to unknown spin '" + name + "'");
  return sys.index_of(name);
}

}  // namespace

Gate::Gate(SpinSystemPtr system, std::vector<std::uint32_t> permutation, std::string label,
           std::vector<std::string> involved_spins)
    : system_(std::move(system)),
      permutation_(std::move(permutation)),
      label_(std::move(label)),
      involved_(std::move(involved_spins)) {
  if (!system_) throw ParameterError("gate requires a spin system");
  const std::size_t dim = system_->dimension();
  if (permutation_.size() != dim) throw ParameterError("permutation length must equal 2^n");
  std::vector<bool> seen(dim, false);
  for (auto y : permutation_) {
    if (y >= dim || seen[y]) throw ParameterError("gate '" + label_ + "' is not a bijection");
    seen[y] = true;
  }
  for (const auto& s : involved_) spin_index(*system_, s);
}

std::uint32_t Gate::involved_mask() const {
  std::uint32_t mask = 0;
  for (const auto& s : involved_) mask |= system_->mask_of(system_->index_of(s));
  return mask;
}

Gate Gate::inverse() const {
  std::vector<std::uint32_t> inv(permutation_.size());
  for (std::uint32_t x = 0; x < permutation_.size(); ++x) inv[permutation_[x]] = x;
  return Gate(system_, std::move(inv), label_ + "^-1", involved_);
}

Gate Gate::then(const Gate& next) const {
  if (!(*system_ == next.system())) throw ParameterError("cannot compose gates of different systems");
  std::vector<std::uint32_t> composed(permutation_.size());
  for (std::uint32_t x = 0; x < permutation_.size(); ++x) {
    composed[x] = next.permutation_[permutation_[x]];
  }
  auto involved = involved_;
  for (const auto& s : next.involved_) {
    if (std::find(involved.begin(), involved.end(), s) == involved.end()) involved.push_back(s);
  }
  return Gate(system_, std::move(composed), label_ + ";" + next.label_, std::move(involved));
}

bool Gate::is_identity() const {
  for (std::uint32_t x = 0; x < permutation_.size(); ++x) {
    if (permutation_[x] != x) return false;
  }
  return true;
}

Gate pe(SpinSystemPtr system, const std::string& a, const std::string& b) {
  const auto ia = spin_index(*system, a);
  const auto ib = spin_index(*system, b);
  if (ia == ib) throw ParameterError("PE needs two distinct spins");
  const std::uint32_t ma = system->mask_of(ia);
  const std::uint32_t mb = system->mask_of(ib);
  std::vector<std::uint32_t> perm(system->dimension());
  for (std::uint32_t x = 0; x < perm.size(); ++x) {
    const bool bit_a = x & ma;
    const bool bit_b = x & mb;
    perm[x] = bit_a == bit_b ? x : (x ^ ma ^ mb);
  }
  return Gate(std::move(system), std::move(perm), "PE(" + a + "->" + b + ")", {a, b});
}

Gate comp(SpinSystemPtr system, const std::string& target, const std::string& a, const std::string& b) {
  const auto it = spin_index(*system, target);
  const auto ia = spin_index(*system, a);
  const auto ib = spin_index(*system, b);
  if (it == ia || it == ib || ia == ib) throw ParameterError("COMP needs three distinct spins");
  const std::uint32_t mt = system->mask_of(it);
  const std::uint32_t mab = system->mask_of(ia) | system->mask_of(ib);
  const std::uint32_t all = mt | mab;
  std::vector<std::uint32_t> perm(system->dimension());
  for (std::uint32_t x = 0; x < perm.size(); ++x) {
    const std::uint32_t bits = x & all;
    // target up with a, b down  <->  target down with a, b up
    perm[x] = (bits == mab || bits == mt) ? (x ^ all) : x;
  }
  return Gate(std::move(system), std::move(perm), "COMP(" + target + ";" + a + "," + b + ")",
              {target, a, b});
}

void GateModel::validate() const {
  if (!(eta_pe > 0.0 && eta_pe <= 1.0)) throw ParameterError("eta_pe must lie in (0, 1]");
  if (!(eta_comp > 0.0 && eta_comp <= 1.0)) throw ParameterError("eta_comp must lie in (0, 1]");
}

DiagonalState apply(const Gate& gate, const DiagonalState& state, double eta, DepolarizationScope scope) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParameterError("gate efficiency must lie in (0, 1]");
  if (!(gate.system() == state.system())) throw ParameterError("gate and state belong to different systems");

  const auto& perm = gate.permutation();
  const auto& in = state.excess();
  std::vector<double> out(in.size());
  for (std::uint32_t x = 0; x < in.size(); ++x) out[perm[x]] = in[x];
  if (eta == 1.0) return DiagonalState(state.system_ptr(), std::move(out));

  if (scope == DepolarizationScope::global) {
    for (auto& v : out) v *= eta;
    return DiagonalState(state.system_ptr(), std::move(out));
  }

  // average the ideal output over all assignments of the involved bits
  const std::uint32_t mask = gate.involved_mask();
  const double group = static_cast<double>(std::uint32_t{1} << std::popcount(mask));
  std::vector<double> sums(in.size(), 0.0);
  for (std::uint32_t x = 0; x < out.size(); ++x) sums[x & ~mask] += out[x];
  for (std::uint32_t x = 0; x < out.size(); ++x) {
    out[x] = eta * out[x] + (1.0 - eta) * sums[x & ~mask] / group;
  }
  return DiagonalState(state.system_ptr(), std::move(out));
}

}  // namespace algcool
