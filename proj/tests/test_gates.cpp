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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "algcool/errors.hpp"
#include "algcool/gates.hpp"
#include "algcool/thermo.hpp"
#include "test_support.hpp"

using namespace algcool;
using algcool::testing::tce4;

namespace {

SpinSystemPtr reversed_tce() {
  std::vector<Spin> spins = {
      {"C1", 1.0, 29.2, 0.23, "13C"},
      {"C2", 1.0, 17.3, 0.44, "13C"},
      {"H", 4.0, 2.67, 0.20, "1H"},
  };
  return std::make_shared<const SpinSystem>(std::move(spins), 1e-5, "tce-c1-first");
}

DiagonalState from_pattern(const SpinSystemPtr& sys, std::vector<double> d) {
  return state_from_deviation(sys, DeviationDiagonal{std::move(d)});
}

void check_deviation(const DiagonalState& s, const std::vector<double>& expected, double tol) {
  const auto d = deviation_diagonal(s);
  REQUIRE(d.values.size() == expected.size());
  for (std::size_t x = 0; x < expected.size(); ++x) CHECK(std::abs(d.values[x] - expected[x]) <= tol);
}

// Swap the populations of the (t,a,b) = 011 and 100 states by hand and read off the target marginal.
double comp_oracle(const std::vector<double>& pops, std::uint32_t mt, std::uint32_t ma, std::uint32_t mb,
                   double eps) {
  auto p = pops;
  const std::uint32_t all = mt | ma | mb;
  for (std::uint32_t x = 0; x < p.size(); ++x) {
    if ((x & all) == (ma | mb)) std::swap(p[x], p[(x & ~all) | mt]);
  }
  double up = 0.0;
  double down = 0.0;
  for (std::uint32_t x = 0; x < p.size(); ++x) (x & mt ? down : up) += p[x];
  return (up - down) / eps;
}

}  // namespace

TEST_CASE("PE on equilibrium reproduces the exchanged diagonal") {
  const auto sys = tce4();
  const auto in = from_pattern(sys, {6, 4, 4, 2, -2, -4, -4, -6});
  const auto out = apply(pe(sys, "H", "C2"), in);
  check_deviation(out, {6, 4, -2, -4, 4, 2, -4, -6}, 1e-9);

  // the physical equilibrium state agrees at leading order
  const auto eq_out = apply(pe(sys, "H", "C2"), equilibrium_state(sys));
  check_deviation(eq_out, {6, 4, -2, -4, 4, 2, -4, -6}, 3 * 3 * 1e-5 * 16);
  CHECK(marginal_polarization(eq_out, "C2") == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(marginal_polarization(eq_out, "H") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(marginal_polarization(eq_out, "C1") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("PE basic cases") {
  const auto sys = tce4();
  const auto uni = DiagonalState::uniform(sys);
  CHECK(apply(pe(sys, "C1", "H"), uni).excess() == uni.excess());
  const std::vector<double> pols = {4, 1, 1};
  const auto out = apply(pe(sys, "H", "C2"), build_product_state(sys, pols));
  const auto m = marginal_polarizations(out);
  CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(m[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pe(sys, "H", "C2").label() == "PE(H->C2)");
  CHECK(pe(sys, "H", "C2").permutation() == pe(sys, "C2", "H").inverse().permutation());
}

TEST_CASE("COMP maps the compressible diagonal exactly") {
  const auto sys = reversed_tce();
  const auto in = from_pattern(sys, {3, 1, 1, -1, 1, -1, -1, -3});
  check_deviation(apply(comp(sys, "C1", "C2", "H"), in), {3, 1, 1, 1, -1, -1, -1, -3}, 1e-9);
  CHECK(comp(sys, "C1", "C2", "H").label() == "COMP(C1;C2,H)");
}

TEST_CASE("COMP on equal polarizations") {
  const auto sys = tce4();
  const std::vector<double> ones = {1, 1, 1};
  const auto out = apply(comp(sys, "C1", "C2", "H"), build_product_state(sys, ones));
  // corrections are O(eps_unit^2) relative; in eps_unit units that is ~1e-10
  CHECK(std::abs(marginal_polarization(out, "C1") - 1.5) <= 1e-9);
  CHECK(std::abs(marginal_polarization(out, "C2") - 0.5) <= 1e-9);
  CHECK(std::abs(marginal_polarization(out, "H") - 0.5) <= 1e-9);
}

TEST_CASE("COMP against the brute-force transposition") {
  const auto sys = reversed_tce();
  const std::vector<double> pols = {0.955, 3.34, 3.00};
  const auto s = build_product_state(sys, pols);
  const double oracle = comp_oracle(s.populations(), 4, 2, 1, 1e-5);
  const double got = marginal_polarization(apply(comp(sys, "C1", "C2", "H"), s), "C1");
  CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(got == doctest::Approx(3.65).epsilon(2e-3));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = algcool::testing::random_pols(3, rng, -50, 50);
    const auto st = build_product_state(sys, p);
    const double o = comp_oracle(st.populations(), 4, 2, 1, 1e-5);
    const double g = marginal_polarization(apply(comp(sys, "C1", "C2", "H"), st), "C1");
    CHECK(g == doctest::Approx(o).epsilon(1e-8).scale(1.0));
    CHECK(std::abs(g - ((p[0] + p[1] + p[2]) - p[0] * p[1] * p[2] * 1e-10) / 2.0) <= 1e-9);
  }
}

TEST_CASE("gate efficiency on the TCE equilibrium") {
  const auto tce = make_tce_system();
  const auto eq = equilibrium_state(tce);
  const auto after_pe = apply(pe(tce, "H", "C2"), eq, 0.95);
  CHECK(marginal_polarization(after_pe, "C2") == doctest::Approx(0.95 * 3.98).epsilon(1e-10));
  CHECK(marginal_polarization(after_pe, "C2") == doctest::Approx(3.781).epsilon(1e-4));

  const auto ideal = apply(comp(tce, "C1", "C2", "H"), eq);
  CHECK(marginal_polarization(ideal, "C1") == doctest::Approx(2.99).epsilon(1e-4));
  const auto after_comp = apply(comp(tce, "C1", "C2", "H"), eq, 0.92);
  CHECK(marginal_polarization(after_comp, "C1") == doctest::Approx(0.92 * 2.99).epsilon(1e-4));
  CHECK(marginal_polarization(after_comp, "C1") == doctest::Approx(2.7508).epsilon(1e-4));

  const auto uni = DiagonalState::uniform(tce);
  for (double eta : {1.0, 0.5}) {
    for (auto scope : {DepolarizationScope::involved, DepolarizationScope::global}) {
      const auto u = apply(comp(tce, "C1", "C2", "H"), uni, eta, scope);
      for (double e : u.excess()) CHECK(e == 0.0);
    }
  }
}

TEST_CASE("gate errors") {
  const auto sys = tce4();
  CHECK_THROWS_AS(pe(sys, "H", "H"), ParameterError);
  CHECK_THROWS_AS(pe(sys, "H", "X"), ParameterError);
  CHECK_THROWS_AS(comp(sys, "C1", "C1", "H"), ParameterError);
  CHECK_THROWS_AS(comp(sys, "C1", "C2", "Q"), ParameterError);
  CHECK_THROWS_AS(Gate(sys, {0, 1, 2, 3, 4, 5, 6, 6}, "bad", {}), ParameterError);
  CHECK_THROWS_AS(Gate(sys, {0, 1, 2}, "short", {}), ParameterError);
  CHECK_THROWS_AS(Gate(sys, {0, 1, 2, 3, 4, 5, 6, 8}, "range", {}), ParameterError);

  const auto eq = equilibrium_state(sys);
  const auto g = pe(sys, "H", "C2");
  CHECK_THROWS_AS(apply(g, eq, 0.0), ParameterError);
  CHECK_THROWS_AS(apply(g, eq, 1.01), ParameterError);
  CHECK_THROWS_AS(apply(g, eq, std::nan("")), ParameterError);
  CHECK_THROWS_AS(apply(g, equilibrium_state(make_tce_system())), ParameterError);

  GateModel m;
  m.eta_comp = 0.0;
  CHECK_THROWS_AS(m.validate(), ParameterError);
  CHECK_NOTHROW(GateModel::ideal().validate());
}

TEST_CASE("property: PE and COMP are involutions") {
  std::mt19937_64 rng(11);
  const auto sys = algcool::testing::chain(4);
  const std::vector<Gate> gates = {pe(sys, "S0", "S3"), pe(sys, "S1", "S2"), comp(sys, "S0", "S1", "S2"),
                                   comp(sys, "S3", "S0", "S2")};
  for (const auto& g : gates) {
    CHECK(g.then(g).is_identity());
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = algcool::testing::random_state(sys, rng);
      const auto back = apply(g, apply(g, s));
      for (std::size_t x = 0; x < s.dimension(); ++x) CHECK(std::abs(back.population(x) - s.population(x)) <= 1e-14);
    }
  }
}

TEST_CASE("property: permutations preserve the population multiset") {
  std::mt19937_64 rng(23);
  const auto sys = algcool::testing::chain(3, 0.02);
  std::vector<std::uint32_t> perm(8);
  std::iota(perm.begin(), perm.end(), 0U);
  for (int trial = 0; trial < 200; ++trial) {
    std::shuffle(perm.begin(), perm.end(), rng);
    const Gate g(sys, perm, "random", {});
    const auto s = algcool::testing::random_state(sys, rng, 5.0);
    const auto t = apply(g, s);
    auto a = s.populations();
    auto b = t.populations();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    CHECK(std::abs(thermo::shannon_entropy_bits(t) - thermo::shannon_entropy_bits(s)) <= 1e-12);
  }
}

TEST_CASE("property: efficiency scaling of marginals") {
  std::mt19937_64 rng(29);
  const auto sys = algcool::testing::chain(4);
  const std::vector<Gate> gates = {pe(sys, "S0", "S2"), comp(sys, "S1", "S0", "S3")};
  std::uniform_real_distribution<double> eta_dist(0.05, 1.0);
  for (const auto& g : gates) {
    const auto mask = g.involved_mask();
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = algcool::testing::random_state(sys, rng, 40.0);
      const double eta = eta_dist(rng);
      const auto ideal = marginal_polarizations(apply(g, s));
      const auto global = marginal_polarizations(apply(g, s, eta, DepolarizationScope::global));
      const auto local = marginal_polarizations(apply(g, s, eta, DepolarizationScope::involved));
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(global[i] == doctest::Approx(eta * ideal[i]).epsilon(1e-9).scale(1.0));
        const bool involved = (sys->mask_of(i) & mask) != 0;
        CHECK(local[i] == doctest::Approx(involved ? eta * ideal[i] : ideal[i]).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("gate algebra") {
  const auto sys = tce4();
  const auto a = pe(sys, "H", "C2");
  const auto b = comp(sys, "C1", "C2", "H");
  const auto ab = a.then(b);
  CHECK(ab.then(ab.inverse()).is_identity());
  CHECK(ab.involved_mask() == 7U);
  CHECK(a.involved_mask() == 6U);
  std::mt19937_64 rng(1);
  const auto s = algcool::testing::random_state(sys, rng);
  const auto seq = apply(b, apply(a, s));
  const auto fused = apply(ab, s);
  CHECK(seq.excess() == fused.excess());
  CHECK_FALSE(a.is_identity());
}
