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

#include "algcool/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "algcool/errors.hpp"

namespace algcool::thermo {

namespace {

void check_conditions(const PhysicalConditions& c) {
  if (!(c.gamma_abs > 0.0 && c.b_field > 0.0 && c.temperature > 0.0)) {
    throw DomainError("gamma, field and temperature must be strictly positive");
  }
}

// p log2(p / q) with the 0 log 0 = 0 convention
double xlog2(double p, double ratio_minus_one) {
  if (p <= 0.0) return 0.0;
  return p * std::log1p(ratio_minus_one) / std::numbers::ln2;
}

}  // namespace

double equilibrium_polarization(const PhysicalConditions& cond) {
  check_conditions(cond);
  return std::tanh(kHbar * cond.gamma_abs * cond.b_field / (2.0 * kBoltzmann * cond.temperature));
}

double spin_temperature(double eps, const PhysicalConditions& cond) {
  check_conditions(cond);
  if (!(eps > 0.0)) throw DomainError("spin temperature needs a positive polarization");
  return kHbar * cond.gamma_abs * cond.b_field / (2.0 * kBoltzmann * eps);
}

SingleIc ic_single(double eps) {
  if (!(std::abs(eps) <= 1.0)) throw DomainError("|eps| must not exceed 1");
  const double e = std::abs(eps);
  // 1 - H2 = sum_b p_b log2(2 p_b) with p = (1 +- e)/2
  const double exact = xlog2((1.0 + e) / 2.0, e) + xlog2((1.0 - e) / 2.0, -e);
  return {exact, eps * eps / std::log(4.0)};
}

double shannon_entropy_bits(const DiagonalState& state) {
  const double n = static_cast<double>(state.system().size());
  const double ic = ic_report(state).exact_ic_bits;
  return n - ic;
}

IcReport ic_report(const DiagonalState& state) {
  const auto& sys = state.system();
  IcReport report;
  report.per_spin_ic.reserve(sys.size());
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const double pol = marginal_polarization(state, i);
    report.per_spin_ic.emplace_back(sys.spin(i).name, pol * pol);
    report.total_ic_leading += pol * pol;
  }
  // n - H(p) = KL(p || uniform) = sum p_x log2(1 + 2^n excess_x)
  const double dim = static_cast<double>(state.dimension());
  const auto& ex = state.excess();
  double kl = 0.0;
  for (std::size_t x = 0; x < ex.size(); ++x) kl += xlog2(state.population(x), dim * ex[x]);
  report.exact_ic_bits = std::clamp(kl, 0.0, static_cast<double>(sys.size()));
  return report;
}

double entropy_bound_max_pol(double total_ic) {
  if (!(total_ic >= 0.0)) throw DomainError("information content must be non-negative");
  return std::sqrt(total_ic);
}

double entropy_bound_max_pol_exact(double ic_bits) {
  if (!(ic_bits >= 0.0 && ic_bits <= 1.0)) {
    throw DomainError("single-spin information content must lie in [0, 1] bits");
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ic_single(mid).exact_bits < ic_bits) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sort_bound(const DiagonalState& state, std::size_t target_index) {
  if (target_index >= state.system().size()) throw LookupError("spin index out of range");
  std::vector<double> ex(state.excess());
  std::sort(ex.begin(), ex.end(), std::greater<>());
  const std::size_t half = ex.size() / 2;
  double top = 0.0;
  double bottom = 0.0;
  for (std::size_t k = 0; k < half; ++k) top += ex[k];
  for (std::size_t k = half; k < ex.size(); ++k) bottom += ex[k];
  return (top - bottom) / state.system().eps_unit();
}

double sort_bound(const DiagonalState& state, const std::string& target) {
  return sort_bound(state, state.system().index_of(target));
}

}  // namespace algcool::thermo
