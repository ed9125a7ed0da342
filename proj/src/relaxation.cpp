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

#include "algcool/relaxation.hpp"

#include <cmath>
#include <cstdint>

#include "algcool/errors.hpp"

namespace algcool {

namespace {

constexpr std::size_t kParallelThreshold = std::size_t{1} << 12;

void check_duration(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ParameterError("relaxation time must be finite and >= 0");
}

// Index of the k-th basis state with `bit` cleared (bit is a single-bit mask).
inline std::uint32_t insert_zero(std::uint32_t k, std::uint32_t bit) {
  const std::uint32_t low = k & (bit - 1);
  return ((k ^ low) << 1) | low;
}

// In excess form (p = u + e): for a pair (e0, e1) of spin i,
//   e0' = d e0 + (1-d) [ (1+a)(e0+e1)/2 + a u ],  e1' = e0 + e1 - e0'
// with a the absolute equilibrium polarization.
inline void relax_pair(double& e0, double& e1, double d, double a, double u) {
  const double s = e0 + e1;
  const double up = d * e0 + (1.0 - d) * (0.5 * (1.0 + a) * s + a * u);
  e1 = s - up;
  e0 = up;
}

}  // namespace

RelaxationChannel RelaxationChannel::for_duration(const SpinSystem& system, double t) {
  check_duration(t);
  RelaxationChannel ch;
  ch.eps_unit = system.eps_unit();
  for (const auto& s : system.spins()) {
    ch.decay.push_back(std::exp(-t / s.t1));
    ch.eq_pol.push_back(s.gamma_rel);
  }
  return ch;
}

std::array<std::array<double, 2>, 2> RelaxationChannel::stochastic_matrix(std::size_t i) const {
  const double d = decay.at(i);
  const double a = eq_pol.at(i) * eps_unit;
  const double up = 0.5 * (1.0 + a);
  const double down = 0.5 * (1.0 - a);
  return {{{d + (1.0 - d) * up, (1.0 - d) * up}, {(1.0 - d) * down, d + (1.0 - d) * down}}};
}

DiagonalState relax_serial(const DiagonalState& state, double t) {
  const auto& sys = state.system();
  const auto ch = RelaxationChannel::for_duration(sys, t);
  if (t == 0.0) return state;
  std::vector<double> ex(state.excess());
  const double u = state.base();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const std::uint32_t bit = sys.mask_of(i);
    const double a = ch.eq_pol[i] * ch.eps_unit;
    for (std::uint32_t x = 0; x < ex.size(); ++x) {
      if (x & bit) continue;
      relax_pair(ex[x], ex[x | bit], ch.decay[i], a, u);
    }
  }
  return DiagonalState(state.system_ptr(), std::move(ex));
}

DiagonalState relax(const DiagonalState& state, double t) {
  const auto& sys = state.system();
  const auto ch = RelaxationChannel::for_duration(sys, t);
  if (t == 0.0) return state;
  std::vector<double> ex(state.excess());
  const double u = state.base();
  const auto pairs = static_cast<std::int64_t>(ex.size() / 2);
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const std::uint32_t bit = sys.mask_of(i);
    const double a = ch.eq_pol[i] * ch.eps_unit;
    const double d = ch.decay[i];
    double* data = ex.data();
#pragma omp parallel for schedule(static) if (ex.size() >= kParallelThreshold)
    for (std::int64_t k = 0; k < pairs; ++k) {
      const std::uint32_t x = insert_zero(static_cast<std::uint32_t>(k), bit);
      relax_pair(data[x], data[x | bit], d, a, u);
    }
  }
  return DiagonalState(state.system_ptr(), std::move(ex));
}

}  // namespace algcool
