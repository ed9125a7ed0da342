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


// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "algcool/cli.hpp"
#include "algcool/engine.hpp"
#include "algcool/errors.hpp"
#include "algcool/gates.hpp"
#include "algcool/grape.hpp"
#include "algcool/io.hpp"
#include "algcool/relaxation.hpp"
#include "algcool/sequence.hpp"
#include "algcool/thermo.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace algcool;

namespace {

const std::string kData = ALGCOOL_DATA_DIR;
const std::string kTestData = ALGCOOL_TEST_DATA_DIR;

// Collects the individual checks behind one criterion.
class Criterion {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool passed() const { return failures_.empty(); }
  std::string summary() const {
    std::string s;
    for (const auto& n : notes_) s += (s.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) s += (s.empty() ? "FAILED " : "; FAILED ") + f;
    return s;
  }

 private:
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

SpinSystemPtr gamma4_system() {
  std::vector<Spin> spins = {
      {"H", 4.0, 2.67, 0.20, "1H"},
      {"C2", 1.0, 17.3, 0.44, "13C"},
      {"C1", 1.0, 29.2, 0.23, "13C"},
  };
  return std::make_shared<const SpinSystem>(std::move(spins), 1e-5, "tce-gamma4");
}

GateModel calibrated() {
  GateModel m;
  m.eta_pe = 0.95;
  m.eta_comp = 0.92;
  return m;
}

DiagonalState random_state(const SpinSystemPtr& sys, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t dim = sys->dimension();
  std::vector<double> ex(dim);
  for (auto& e : ex) e = u(rng) * scale * sys->eps_unit() / static_cast<double>(dim);
  const double mean = std::accumulate(ex.begin(), ex.end(), 0.0) / static_cast<double>(dim);
  for (auto& e : ex) e -= mean;
  ex[0] -= std::accumulate(ex.begin(), ex.end(), 0.0);
  return DiagonalState(sys, std::move(ex));
}

double max_dev_error(const DiagonalState& s, const std::vector<double>& expected) {
  const auto d = deviation_diagonal(s);
  double worst = 0.0;
  for (std::size_t x = 0; x < expected.size(); ++x) worst = std::max(worst, std::abs(d.values[x] - expected[x]));
  return worst;
}

// 1 -----------------------------------------------------------------------------------------
void analytics(Criterion& c) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::dispatch({"algcool", "analyze", "--system", kData + "/tce.json"}, out, err);
  c.check(code == 0, "analyze exit code " + std::to_string(code));
  if (code != 0) return;
  const auto j = json::parse(out.str());
  const double ic = j["total_ic"].get<double>();
  const double bound = j["entropy_bound_max_pol"].get<double>();
  c.note("total_ic=" + fmt(ic, 6) + " bound=" + fmt(bound, 6));
  c.check(within(ic, 17.84, 0.01), "total IC not 17.84 +- 0.01");
  c.check(within(bound, 4.224, 0.005), "entropy bound not 4.224 +- 0.005");
}

// 2 -----------------------------------------------------------------------------------------
void gate_diagonals(Criterion& c) {
  const auto sys = gamma4_system();
  const auto pe_in = state_from_deviation(sys, {{6, 4, 4, 2, -2, -4, -4, -6}});
  const double pe_err = max_dev_error(apply(pe(sys, "H", "C2"), pe_in), {6, 4, -2, -4, 4, 2, -4, -6});
  const double pe_eq_err = max_dev_error(apply(pe(sys, "H", "C2"), equilibrium_state(sys)), {6, 4, -2, -4, 4, 2, -4, -6});
  c.check(pe_err <= 1e-9, "PE on the 6,4,4,2 diagonal");
  c.check(pe_eq_err <= 9 * 16 * 1e-5, "PE on the physical equilibrium (leading order)");

  std::vector<Spin> rev = {{"C1", 1, 29.2, 0.23, "13C"}, {"C2", 1, 17.3, 0.44, "13C"}, {"H", 4, 2.67, 0.2, "1H"}};
  const auto rsys = std::make_shared<const SpinSystem>(std::move(rev), 1e-5, "c1-first");
  const auto comp_in = state_from_deviation(rsys, {{3, 1, 1, -1, 1, -1, -1, -3}});
  const auto comp_out = apply(comp(rsys, "C1", "C2", "H"), comp_in);
  const auto d = deviation_diagonal(comp_out);
  const std::vector<double> eq8 = {3, 1, 1, 1, -1, -1, -1, -3};
  bool exact = true;
  for (std::size_t x = 0; x < 8; ++x) exact = exact && std::abs(d.values[x] - eq8[x]) <= 1e-9;
  c.check(exact, "COMP does not map 3,1,1,-1,... onto 3,1,1,1,...");

  const std::vector<double> ones = {1, 1, 1};
  const double target = marginal_polarization(apply(comp(sys, "C1", "C2", "H"), build_product_state(sys, ones)), "C1");
  c.note("PE err=" + fmt(pe_err, 2) + " COMP target=" + fmt(target, 12));
  c.check(std::abs(target - 1.5) <= 1e-9, "COMP on uniform pols is not 1.5");
}

// 3 -----------------------------------------------------------------------------------------
void perfect_pulses(Criterion& c) {
  const auto tce = io::load_system(kData + "/tce.json");
  auto final_of = [&](int kind) {
    return run(build_process(tce, kind, default_delays(kind), 7), GateModel::ideal(), equilibrium_state(tce))
        .final_record();
  };
  auto rel = [](double v, double t, double tol) { return std::abs(v - t) <= tol * t; };
  const auto p1 = final_of(1);
  const auto p2 = final_of(2);
  const auto p3 = final_of(3);
  c.note("P1 C1=" + fmt(p1.pol[2]) + " IC=" + fmt(p1.ic[2]));
  c.note("P2 C1,C2=" + fmt(p2.pol[2]) + "," + fmt(p2.pol[1]));
  c.note("P3 C1,C2,H=" + fmt(p3.pol[2]) + "," + fmt(p3.pol[1]) + "," + fmt(p3.pol[0]));
  c.check(rel(p1.pol[2], 5.49, 0.05), "P1 C1 vs 5.49");
  c.check(rel(p1.ic[2], 30.13, 0.10), "P1 IC_C1 vs 30.13");
  c.check(rel(p2.pol[2], 4.78, 0.05), "P2 C1 vs 4.78");
  c.check(rel(p2.pol[1], 3.70, 0.05), "P2 C2 vs 3.70");
  c.check(rel(p3.pol[2], 3.98, 0.05), "P3 C1 vs 3.98");
  c.check(rel(p3.pol[1], 2.97, 0.05), "P3 C2 vs 2.97");
  c.check(rel(p3.pol[0], 3.75, 0.05), "P3 H vs 3.75");
}

Trajectory calibrated_process1() {
  const auto tce = io::load_system(kData + "/tce.json");
  return run(build_process(tce, 1, default_delays(1), 7), calibrated(), equilibrium_state(tce));
}

// 4 -----------------------------------------------------------------------------------------
void calibrated_buildup(Criterion& c) {
  const auto traj = calibrated_process1();
  const auto rounds = traj.round_records();
  const double measured[] = {3.40, 3.98, 4.34, 4.49, 4.55, 4.59, 4.61};
  double worst = 0.0;
  std::string row;
  for (int r = 1; r <= 7; ++r) {
    const double v = rounds.at(static_cast<std::size_t>(r))->pol[2];
    worst = std::max(worst, std::abs(v - measured[r - 1]));
    row += (r > 1 ? "," : "") + fmt(v);
    c.check(within(v, measured[r - 1], 0.15), "round " + std::to_string(r));
  }
  const auto cycle = detect_limit_cycle(traj, 0.03);
  c.note("C1 by round=" + row + " max|err|=" + fmt(worst, 3));
  c.note("limit cycle round=" + (cycle ? std::to_string(*cycle) : std::string("none")));
  c.check(cycle && *cycle <= 7, "no limit cycle by round 7");
}

// 5 -----------------------------------------------------------------------------------------
void bound_bypass(Criterion& c) {
  const auto traj = calibrated_process1();
  const double ic = traj.round_records().at(7)->ic[2];
  c.note("IC_C1(round 7)=" + fmt(ic));
  c.check(ic > 17.84, "IC_C1 does not exceed 17.84");
  c.check(ic >= 19.5 && ic <= 23.0, "IC_C1 outside [19.5, 23]");
}

// 6 -----------------------------------------------------------------------------------------
void property_suites(Criterion& c) {
  std::mt19937_64 rng(2024);
  const auto tce = io::load_system(kData + "/tce.json");
  const auto sys4 = gamma4_system();

  double entropy_gap = 0.0;
  double involution_gap = 0.0;
  std::vector<std::uint32_t> perm(8);
  std::iota(perm.begin(), perm.end(), 0U);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_state(sys4, rng, 20.0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto p = apply(Gate(sys4, perm, "random", {}), s);
    entropy_gap = std::max(entropy_gap, std::abs(thermo::shannon_entropy_bits(p) - thermo::shannon_entropy_bits(s)));
    for (const auto& g : {pe(sys4, "H", "C2"), pe(sys4, "C1", "H"), comp(sys4, "C1", "C2", "H"), comp(sys4, "H", "C1", "C2")}) {
      const auto back = apply(g, apply(g, s));
      for (std::size_t x = 0; x < 8; ++x) involution_gap = std::max(involution_gap, std::abs(back.population(x) - s.population(x)));
    }
  }
  c.check(entropy_gap <= 1e-12, "permutation entropy change " + fmt(entropy_gap, 3));
  c.check(involution_gap <= 1e-14, "involution gap " + fmt(involution_gap, 3));

  double semigroup = 0.0;
  double law = 0.0;
  std::uniform_real_distribution<double> dt(0.0, 25.0);
  for (int t = 0; t < 200; ++t) {
    const auto s = random_state(tce, rng, 40.0);
    const double a = dt(rng);
    const double b = dt(rng);
    const auto two = relax(relax(s, a), b);
    const auto one = relax(s, a + b);
    for (std::size_t x = 0; x < 8; ++x) {
      semigroup = std::max(semigroup, std::abs(two.excess()[x] - one.excess()[x]) / tce->eps_unit());
    }
    const auto before = marginal_polarizations(s);
    const auto after = marginal_polarizations(one);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto& sp = tce->spin(i);
      const double expect = sp.gamma_rel + (before[i] - sp.gamma_rel) * std::exp(-(a + b) / sp.t1);
      law = std::max(law, std::abs(after[i] - expect));
    }
  }
  c.check(semigroup <= 1e-12, "relaxation semigroup gap " + fmt(semigroup, 3));
  c.check(law <= 1e-12, "exponential marginal law gap " + fmt(law, 3));

  bool deterministic = true;
  for (int kind = 1; kind <= 3; ++kind) {
    const auto seq = build_process(tce, kind, default_delays(kind), 10);
    deterministic = deterministic && run(seq, calibrated(), equilibrium_state(tce)) == run(seq, calibrated(), equilibrium_state(tce));
  }
  c.check(deterministic, "run() not deterministic");

  int violations = 0;
  for (int t = 0; t < 20; ++t) {
    const auto s = random_state(sys4, rng, 30.0);
    const double bound = thermo::sort_bound(s, "C1");
    for (int k = 0; k < 1000; ++k) {
      std::shuffle(perm.begin(), perm.end(), rng);
      if (marginal_polarization(apply(Gate(sys4, perm, "random", {}), s), "C1") > bound + 1e-12) ++violations;
    }
  }
  c.check(violations == 0, std::to_string(violations) + " permutations beat the sort bound");
  c.note("entropy gap=" + fmt(entropy_gap, 2) + " semigroup gap=" + fmt(semigroup, 2) + " law gap=" + fmt(law, 2));
}

// 7 -----------------------------------------------------------------------------------------
grape::GrapeProblem random_grape_problem(std::mt19937_64& rng, grape::CouplingForm form) {
  std::uniform_real_distribution<double> off(-1500.0, 1500.0);
  std::uniform_real_distribution<double> jc(-200.0, 200.0);
  std::uniform_real_distribution<double> pol(-4.0, 4.0);
  grape::GrapeProblem p;
  auto& h = p.hamiltonian;
  h.spins = {"A", "B", "C"};
  h.offsets_hz = {off(rng), off(rng), off(rng)};
  h.j_hz = Eigen::MatrixXd::Zero(3, 3);
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) h.j_hz(a, b) = h.j_hz(b, a) = jc(rng);
  }
  h.coupling = form;
  h.channels = {{"one", {0}}, {"two", {1, 2}}};
  const std::vector<double> init = {pol(rng), pol(rng), pol(rng)};
  const std::vector<double> target = {pol(rng), pol(rng), pol(rng)};
  p.initial = grape::deviation_vector(init);
  p.target = grape::deviation_vector(target);
  p.duration = 2e-3;
  p.slices = 8;
  p.max_amplitude = 5000.0;
  p.rf_scales = grape::default_rf_scales();
  return p;
}

void grape_suite(Criterion& c) {
  std::mt19937_64 rng(77);
  double worst_rel = 0.0;
  for (auto form : {grape::CouplingForm::weak, grape::CouplingForm::isotropic}) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto p = random_grape_problem(rng, form);
      const auto pulse = grape::random_pulse(p, 500 + trial, 0.5);
      const auto g = grape::gradient(pulse, p);
      const double h = 1e-6 * p.max_amplitude;
      for (Eigen::Index k = 0; k < g.rows(); ++k) {
        for (Eigen::Index q = 0; q < g.cols(); ++q) {
          auto plus = pulse;
          auto minus = pulse;
          plus.amplitudes(k, q) += h;
          minus.amplitudes(k, q) -= h;
          const double fd = (grape::fidelity(plus, p) - grape::fidelity(minus, p)) / (2.0 * h);
          worst_rel = std::max(worst_rel, std::abs(g(k, q) - fd) / std::abs(fd));
        }
      }
    }
  }
  c.check(worst_rel <= 1e-4, "gradient vs finite differences");

  const auto pi_cfg = io::load_grape_config(kData + "/grape_pi_pulse.json");
  const auto pi = grape::optimize(pi_cfg.problem, pi_cfg.seed, pi_cfg.optimizer);
  const double f_pi = grape::fidelity(pi, pi_cfg.problem);
  c.check(f_pi >= 0.999, "pi pulse fidelity");

  const auto start = std::chrono::steady_clock::now();
  const auto pe_cfg = io::load_grape_config(kData + "/grape_pe_tce.json");
  const auto init = grape::random_pulse(pe_cfg.problem, pe_cfg.seed, pe_cfg.init_fraction);
  const auto pe_pulse = grape::optimize(pe_cfg.problem, init, pe_cfg.optimizer);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double f_pe = grape::fidelity(pe_pulse, pe_cfg.problem);
  const auto per = pe_pulse.scale_fidelities;
  c.check(f_pe >= 0.98, "3-spin PE mean fidelity");
  c.check(seconds <= 300.0, "3-spin PE optimization took longer than 5 minutes");
  c.note("FD max rel err=" + fmt(worst_rel, 2) + " pi F=" + fmt(f_pi, 6) + " in " + std::to_string(pi.iterations) + " it");
  c.note("PE mean F=" + fmt(f_pe, 5) + " per scale=" + fmt(per.at(0), 4) + "/" + fmt(per.at(1), 4) + "/" +
         fmt(per.at(2), 4) + " in " + std::to_string(pe_pulse.iterations) + " it, " + fmt(seconds, 3) + " s");
}

// 8 -----------------------------------------------------------------------------------------
void dsl_suite(Criterion& c) {
  const auto tce = io::load_system(kData + "/tce.json");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(fs::path(kTestData) / "seq")) {
    if (e.path().extension() == ".seq") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  c.check(files.size() >= 20, "corpus has fewer than 20 files");
  int valid = 0;
  int invalid = 0;
  for (const auto& f : files) {
    auto exp_path = f;
    exp_path.replace_extension(".expected");
    const auto expected = io::read_text(exp_path);
    const auto src = io::read_text(f);
    const std::string name = f.filename().string();
    if (expected.rfind("ok\n", 0) == 0) {
      ++valid;
      try {
        const auto seq = parse_sequence(src, tce);
        c.check(format_sequence(seq) == expected.substr(3), name + " AST mismatch");
      } catch (const std::exception& e) {
        c.check(false, name + " rejected: " + e.what());
      }
    } else {
      ++invalid;
      std::istringstream is(expected);
      std::string word;
      std::string loc;
      std::string fragment;
      is >> word >> loc;
      std::getline(is >> std::ws, fragment);
      try {
        parse_sequence(src, tce);
        c.check(false, name + " accepted");
      } catch (const ParseError& e) {
        const std::string got = std::to_string(e.line()) + ":" + std::to_string(e.column());
        c.check(got == loc && e.message().find(fragment) != std::string::npos,
                name + " reported " + got + " '" + e.message() + "'");
      }
    }
  }
  const auto dsl = parse_sequence(io::read_text(kData + "/process1.seq"), tce);
  const auto tmpl = build_process(tce, 1, default_delays(1), 7);
  const bool same = run(dsl, calibrated(), equilibrium_state(tce)) == run(tmpl, calibrated(), equilibrium_state(tce)) &&
                    run(dsl, GateModel::ideal(), equilibrium_state(tce)) == run(tmpl, GateModel::ideal(), equilibrium_state(tce));
  c.check(same, "process1.seq and build_process(1) trajectories differ");
  c.note(std::to_string(valid) + " valid + " + std::to_string(invalid) + " invalid files");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"analytics: equilibrium IC and entropy bound", analytics},
      {"gate diagonals", gate_diagonals},
      {"perfect-pulse processes 1-3", perfect_pulses},
      {"calibrated process 1 vs measured buildup", calibrated_buildup},
      {"IC_C1 beyond the closed-system bound", bound_bypass},
      {"property suites", property_suites},
      {"GRAPE gradient, pi pulse, robust PE", grape_suite},
      {"DSL corpus and process-1 equivalence", dsl_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    if (!c.passed()) ++failed;
    std::cout << (c.passed() ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << " -- " << c.summary()
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
