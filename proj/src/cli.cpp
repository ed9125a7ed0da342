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

#include "algcool/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "algcool/engine.hpp"
#include "algcool/errors.hpp"
#include "algcool/grape.hpp"
#include "algcool/io.hpp"
#include "algcool/parallel.hpp"
#include "algcool/sequence.hpp"
#include "algcool/thermo.hpp"

namespace algcool::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A ParseError annotated with the file it came from.
class FileParseError : public std::runtime_error {
 public:
  FileParseError(const fs::path& path, const ParseError& e)
      : std::runtime_error(path.string() + ":" + e.what()) {}
};

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("output directory '" + parent.string() + "' does not exist");
  }
}

bool has_extension(const std::string& path, const char* ext) {
  return fs::path(path).extension() == ext;
}

SpinSystemPtr system_or_default(const std::string& path) {
  return path.empty() ? make_tce_system() : io::load_system(path);
}

PulseSequence load_sequence(const std::string& path, const SpinSystemPtr& system) {
  const auto text = io::read_text(path);
  try {
    auto seq = parse_sequence(text, system);
    seq.label = fs::path(path).filename().string();
    return seq;
  } catch (const ParseError& e) {
    throw FileParseError(path, e);
  }
}

// "ic:C1" or "ic:C1,C2"
std::vector<std::string> parse_objective(const std::string& spec) {
  if (spec.rfind("ic:", 0) != 0) throw ConfigError("objective must look like ic:C1[,C2...]");
  std::vector<std::string> spins;
  std::stringstream ss(spec.substr(3));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) spins.push_back(item);
  }
  if (spins.empty()) throw ConfigError("objective names no spins");
  return spins;
}

// "D2=1:10:1,D3=1:10:1"
std::vector<DelayAxis> parse_grid(const std::string& spec) {
  std::vector<DelayAxis> axes;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("grid entry '" + item + "' must look like NAME=min:max:step");
    DelayAxis axis;
    axis.name = item.substr(0, eq);
    std::stringstream range(item.substr(eq + 1));
    std::string part;
    std::vector<double> nums;
    while (std::getline(range, part, ':')) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(part, &used));
        if (used != part.size()) throw std::invalid_argument(part);
      } catch (const std::exception&) {
        throw ConfigError("grid entry '" + item + "' has a malformed number");
      }
    }
    if (nums.size() == 1) nums = {nums[0], nums[0], 1.0};
    if (nums.size() != 3) throw ConfigError("grid entry '" + item + "' must look like NAME=min:max:step");
    axis.min = nums[0];
    axis.max = nums[1];
    axis.step = nums[2];
    axes.push_back(axis);
  }
  if (axes.empty()) throw ParameterError("scan grid is empty");
  return axes;
}

GateModel gate_model(double eta_pe, double eta_comp, const std::string& scope) {
  GateModel m{eta_pe, eta_comp, DepolarizationScope::involved};
  if (scope == "global") {
    m.scope = DepolarizationScope::global;
  } else if (scope != "involved") {
    throw ConfigError("depolarization scope must be 'involved' or 'global'");
  }
  m.validate();
  return m;
}

json final_summary(const Trajectory& traj) {
  json j;
  const auto& last = traj.final_record();
  for (std::size_t i = 0; i < traj.spins.size(); ++i) {
    j["final_pol"][traj.spins[i]] = last.pol[i];
    j["final_ic"][traj.spins[i]] = last.ic[i];
  }
  j["final_ic_total"] = last.ic_total;
  j["rounds"] = last.round;
  j["time_s"] = last.time_s;
  return j;
}

struct AnalyzeOpts {
  std::string system;
  std::optional<double> b_field;
  std::optional<double> temperature;
  std::optional<double> gamma_ref;
};

int do_analyze(const AnalyzeOpts& o, std::ostream& out) {
  const auto sys = io::load_system(o.system);
  const auto eq = equilibrium_state(sys);
  const auto report = thermo::ic_report(eq);
  json j;
  j["system"] = sys->label();
  j["eps_unit"] = sys->eps_unit();
  for (std::size_t i = 0; i < sys->size(); ++i) {
    const auto& name = sys->spin(i).name;
    j["equilibrium_polarization"][name] = marginal_polarization(eq, i);
    j["ic"]["per_spin"][name] = report.per_spin_ic[i].second;
    j["sort_bound"][name] = thermo::sort_bound(eq, i);
  }
  j["ic"]["units"] = thermo::IcReport::units;
  j["ic"]["exact_ic_bits"] = report.exact_ic_bits;
  j["total_ic"] = report.total_ic_leading;
  j["entropy_bound_max_pol"] = thermo::entropy_bound_max_pol(report.total_ic_leading);
  j["entropy_bound_max_pol_exact"] =
      thermo::entropy_bound_max_pol_exact(std::min(report.exact_ic_bits, 1.0)) / sys->eps_unit();

  if (o.b_field || o.temperature || o.gamma_ref) {
    if (!(o.b_field && o.temperature && o.gamma_ref)) {
      throw ConfigError("--b-field, --temperature and --gamma-ref must be given together");
    }
    json phys;
    for (const auto& s : sys->spins()) {
      const thermo::PhysicalConditions c{*o.gamma_ref * std::abs(s.gamma_rel), *o.b_field, *o.temperature};
      const double eps = thermo::equilibrium_polarization(c);
      phys[s.name]["equilibrium_polarization"] = eps;
      phys[s.name]["spin_temperature_k"] = thermo::spin_temperature(eps, c);
    }
    j["physical"] = phys;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

struct SimulateOpts {
  std::string system;
  int process = 0;
  std::string sequence;
  int rounds = 7;
  std::map<std::string, std::optional<double>> delays{{"D2", {}}, {"D3", {}}, {"D4", {}}, {"D5", {}}};
  double eta_pe = 1.0;
  double eta_comp = 1.0;
  std::string scope = "involved";
  std::string out;
  std::string json_out;
};

int do_simulate(const SimulateOpts& o, std::ostream& out) {
  check_output_path(o.out);
  check_output_path(o.json_out);
  const auto sys = io::load_system(o.system);
  const auto model = gate_model(o.eta_pe, o.eta_comp, o.scope);
  PulseSequence seq;
  if (!o.sequence.empty()) {
    seq = load_sequence(o.sequence, sys);
  } else {
    auto delays = default_delays(o.process);
    for (const auto& [k, v] : o.delays) {
      if (v) delays[k] = *v;
    }
    seq = build_process(sys, o.process, delays, o.rounds);
  }
  const auto traj = run(seq, model, equilibrium_state(sys));
  io::write_text(o.out, has_extension(o.out, ".json") ? io::trajectory_to_json(traj) : io::trajectory_to_csv(traj));
  if (!o.json_out.empty()) io::write_text(o.json_out, io::trajectory_to_json(traj));

  json j = final_summary(traj);
  j["sequence"] = seq.label;
  if (auto lc = detect_limit_cycle(traj, 0.03)) {
    j["limit_cycle_round"] = *lc;
  } else {
    j["limit_cycle_round"] = nullptr;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

struct ScanOpts {
  std::string system;
  int process = 1;
  std::string grid;
  std::string objective = "ic:C1";
  int rounds = 7;
  double eta_pe = 1.0;
  double eta_comp = 1.0;
  std::string scope = "involved";
  std::string out;
};

int do_scan(const ScanOpts& o, std::ostream& out) {
  check_output_path(o.out);
  const auto sys = io::load_system(o.system);
  ScanRequest req;
  req.kind = o.process;
  req.axes = parse_grid(o.grid);
  req.objective_spins = parse_objective(o.objective);
  req.rounds = o.rounds;
  req.model = gate_model(o.eta_pe, o.eta_comp, o.scope);
  const auto result = scan_delays(sys, req);
  if (!o.out.empty()) io::write_text(o.out, io::scan_surface_to_csv(result));
  out << io::scan_optimum_to_json(result, req.objective_spins);
  return kOk;
}

struct GrapeOpts {
  std::string config;
  std::string out;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters;
};

int do_grape(const GrapeOpts& o, std::ostream& out) {
  check_output_path(o.out);
  check_output_path(o.csv);
  auto cfg = io::load_grape_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.max_iters) cfg.optimizer.max_iters = *o.max_iters;
  const auto init = grape::random_pulse(cfg.problem, cfg.seed, cfg.init_fraction);
  const auto pulse = grape::optimize(cfg.problem, init, cfg.optimizer);
  const double f = pulse.fidelity_trace.back();
  if (!std::isfinite(f)) throw NumericalFailure("optimizer produced a non-finite fidelity");
  if (cfg.require_fidelity && f < *cfg.require_fidelity) {
    throw NumericalFailure("fidelity " + std::to_string(f) + " is below the required " +
                           std::to_string(*cfg.require_fidelity));
  }
  io::write_text(o.out, io::pulse_to_json(pulse, cfg.problem));
  if (!o.csv.empty()) io::write_text(o.csv, io::pulse_to_csv(pulse, cfg.problem));
  json j;
  j["fidelity"] = f;
  j["scale_fidelities"] = pulse.scale_fidelities;
  j["iterations"] = pulse.iterations;
  j["stagnated"] = pulse.stagnated;
  out << j.dump(2) << "\n";
  return kOk;
}

int do_parse_check(const std::string& sequence, const std::string& system, std::ostream& out) {
  const auto sys = system_or_default(system);
  const auto seq = load_sequence(sequence, sys);
  out << sequence << ": ok (" << seq.steps.size() << " top-level statements)\n";
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  parallel::configure_threads_from_env();

  CLI::App app{"Algorithmic cooling simulator and GRAPE pulse designer", "algcool"};
  app.require_subcommand(1);

  AnalyzeOpts an;
  auto* analyze = app.add_subcommand("analyze", "Equilibrium IC, entropy bound and sort bound of a spin system");
  analyze->add_option("--system", an.system, "Spin system JSON")->required();
  analyze->add_option("--b-field", an.b_field, "Field in tesla (optional physical block)");
  analyze->add_option("--temperature", an.temperature, "Bath temperature in kelvin");
  analyze->add_option("--gamma-ref", an.gamma_ref, "Reference gyromagnetic ratio, rad/s/T");

  SimulateOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Run a cooling process or sequence file");
  simulate->add_option("--system", sim.system, "Spin system JSON")->required();
  auto* proc = simulate->add_option("--process", sim.process, "Process template 1, 2 or 3")->check(CLI::Range(1, 3));
  auto* seqf = simulate->add_option("--sequence", sim.sequence, "Sequence DSL file (.seq)");
  proc->excludes(seqf);
  simulate->add_option("--rounds", sim.rounds, "Cooling rounds (default 7)")->check(CLI::NonNegativeNumber);
  for (auto& [name, value] : sim.delays) simulate->add_option("--" + name, value, name + " delay in seconds");
  simulate->add_option("--eta-pe", sim.eta_pe, "PE efficiency in (0, 1]");
  simulate->add_option("--eta-comp", sim.eta_comp, "COMP efficiency in (0, 1]");
  simulate->add_option("--depolarization", sim.scope, "Imperfect-gate scope: involved | global");
  simulate->add_option("--out", sim.out, "Trajectory output (.csv or .json)")->required();
  simulate->add_option("--json", sim.json_out, "Additional JSON mirror of the trajectory");

  ScanOpts sc;
  auto* scan = app.add_subcommand("scan", "Exhaustive delay grid scan");
  scan->add_option("--system", sc.system, "Spin system JSON")->required();
  scan->add_option("--process", sc.process, "Process template 1, 2 or 3")->required()->check(CLI::Range(1, 3));
  scan->add_option("--grid", sc.grid, "e.g. D2=1:10:1,D3=1:10:1")->required();
  scan->add_option("--objective", sc.objective, "ic:SPIN[,SPIN...]");
  scan->add_option("--rounds", sc.rounds, "Cooling rounds")->check(CLI::NonNegativeNumber);
  scan->add_option("--eta-pe", sc.eta_pe, "PE efficiency in (0, 1]");
  scan->add_option("--eta-comp", sc.eta_comp, "COMP efficiency in (0, 1]");
  scan->add_option("--depolarization", sc.scope, "Imperfect-gate scope: involved | global");
  scan->add_option("--out", sc.out, "Objective surface CSV");

  GrapeOpts gr;
  auto* grape_cmd = app.add_subcommand("grape", "Optimize a robust state-to-state pulse");
  grape_cmd->add_option("--config", gr.config, "GRAPE config JSON")->required();
  grape_cmd->add_option("--out", gr.out, "Pulse JSON output")->required();
  grape_cmd->add_option("--csv", gr.csv, "Slice table CSV output");
  grape_cmd->add_option("--seed", gr.seed, "Override the config RNG seed");
  grape_cmd->add_option("--max-iters", gr.max_iters, "Override optimizer iterations");

  std::string pc_sequence;
  std::string pc_system;
  auto* parse_check = app.add_subcommand("parse-check", "Validate a sequence DSL file");
  parse_check->add_option("--sequence", pc_sequence, "Sequence DSL file")->required();
  parse_check->add_option("--system", pc_system, "Spin system JSON (default: built-in TCE)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (analyze->parsed()) return do_analyze(an, out);
    if (simulate->parsed()) {
      if (sim.process == 0 && sim.sequence.empty()) {
        err << "simulate: one of --process or --sequence is required\n";
        return kUsage;
      }
      return do_simulate(sim, out);
    }
    if (scan->parsed()) return do_scan(sc, out);
    if (grape_cmd->parsed()) return do_grape(gr, out);
    if (parse_check->parsed()) return do_parse_check(pc_sequence, pc_system, out);
  } catch (const FileParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kUsage;
}

}  // namespace algcool::cli
