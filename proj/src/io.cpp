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

#include "algcool/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "algcool/errors.hpp"

namespace algcool::io {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* kind_name(RecordKind k) {
  switch (k) {
    case RecordKind::initial: return "initial";
    case RecordKind::round: return "round";
    case RecordKind::measure: return "measure";
  }
  return "?";
}

}  // namespace

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot write '" + path.string() + "'");
  }
}

SpinSystemPtr parse_system(const std::string& json_text) {
  const json j = parse_json(json_text, "system config");
  try {
    std::vector<Spin> spins;
    for (const auto& s : j.at("spins")) {
      Spin spin;
      spin.name = s.at("name").get<std::string>();
      spin.gamma_rel = s.at("gamma_rel").get<double>();
      spin.t1 = s.at("t1_s").get<double>();
      spin.t2star = s.value("t2star_s", 1.0);
      spin.rf_channel = s.value("rf_channel", std::string{});
      spins.push_back(std::move(spin));
    }
    const double eps = j.value("eps_unit", SpinSystem::kDefaultEpsUnit);
    return std::make_shared<const SpinSystem>(std::move(spins), eps, j.value("label", std::string{}));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("system config: ") + e.what());
  }
}

SpinSystemPtr load_system(const std::filesystem::path& path) {
  try {
    return parse_system(read_text(path));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.find(path.string()) != std::string::npos) throw;
    throw ConfigError(path.string() + ": " + msg);
  }
}

std::string system_to_json(const SpinSystem& system) {
  json j;
  j["label"] = system.label();
  j["eps_unit"] = system.eps_unit();
  j["spins"] = json::array();
  for (const auto& s : system.spins()) {
    j["spins"].push_back({{"name", s.name},
                          {"gamma_rel", s.gamma_rel},
                          {"t1_s", s.t1},
                          {"t2star_s", s.t2star},
                          {"rf_channel", s.rf_channel}});
  }
  return j.dump(2) + "\n";
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "round,time_s";
  for (const auto& s : traj.spins) os << ",pol_" << s;
  for (const auto& s : traj.spins) os << ",ic_" << s;
  os << ",ic_total,ic_exact_bits,event\n";
  for (const auto& r : traj.records) {
    os << r.round << ',' << format_g6(r.time_s);
    for (double p : r.pol) os << ',' << format_g6(p);
    for (double ic : r.ic) os << ',' << format_g6(ic);
    os << ',' << format_g6(r.ic_total) << ',' << format_g6(r.ic_exact_bits) << ',' << csv_field(r.event) << '\n';
  }
  return os.str();
}

std::string trajectory_to_json(const Trajectory& traj) {
  json j;
  j["spins"] = traj.spins;
  j["records"] = json::array();
  for (const auto& r : traj.records) {
    json rec;
    rec["round"] = r.round;
    rec["time_s"] = r.time_s;
    rec["kind"] = kind_name(r.kind);
    for (std::size_t i = 0; i < traj.spins.size(); ++i) {
      rec["pol"][traj.spins[i]] = r.pol[i];
      rec["ic"][traj.spins[i]] = r.ic[i];
    }
    rec["ic_total"] = r.ic_total;
    rec["ic_exact_bits"] = r.ic_exact_bits;
    rec["event"] = r.event;
    j["records"].push_back(std::move(rec));
  }
  return j.dump(2) + "\n";
}

std::string scan_surface_to_csv(const ScanResult& result) {
  std::ostringstream os;
  for (const auto& n : result.axis_names) os << n << ',';
  os << "objective\n";
  for (const auto& p : result.surface) {
    for (double d : p.delays) os << format_g6(d) << ',';
    os << format_g6(p.objective) << '\n';
  }
  return os.str();
}

std::string scan_optimum_to_json(const ScanResult& result, const std::vector<std::string>& objective_spins) {
  json j;
  j["objective"] = {{"kind", "ic"}, {"spins", objective_spins}, {"value", result.best.objective}};
  j["best_delays"] = result.best_delays;
  j["grid_points"] = result.surface.size();
  return j.dump(2) + "\n";
}

GrapeConfig parse_grape_config(const std::string& json_text) {
  const json j = parse_json(json_text, "grape config");
  GrapeConfig cfg;
  try {
    auto& h = cfg.problem.hamiltonian;
    const auto& jh = j.at("hamiltonian");
    h.spins = jh.at("spins").get<std::vector<std::string>>();
    const std::size_t n = h.spins.size();
    auto index = [&](const std::string& name) -> std::size_t {
      for (std::size_t i = 0; i < n; ++i) {
        if (h.spins[i] == name) return i;
      }
      throw ConfigError("grape config: unknown spin '" + name + "'");
    };
    h.offsets_hz.assign(n, 0.0);
    if (jh.contains("offsets_hz")) {
      const auto& off = jh.at("offsets_hz");
      if (off.is_array()) {
        h.offsets_hz = off.get<std::vector<double>>();
      } else {
        for (const auto& [name, v] : off.items()) h.offsets_hz[index(name)] = v.get<double>();
      }
    }
    h.j_hz = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& c : jh.value("j_couplings_hz", json::array())) {
      const auto pair = c.at("spins").get<std::vector<std::string>>();
      if (pair.size() != 2) throw ConfigError("grape config: a J coupling names exactly two spins");
      const auto a = static_cast<Eigen::Index>(index(pair[0]));
      const auto b = static_cast<Eigen::Index>(index(pair[1]));
      if (a == b) throw ConfigError("grape config: J coupling of a spin with itself");
      h.j_hz(a, b) = h.j_hz(b, a) = c.at("j").get<double>();
    }
    const auto form = jh.value("coupling_form", std::string("weak"));
    if (form == "weak") {
      h.coupling = grape::CouplingForm::weak;
    } else if (form == "isotropic") {
      h.coupling = grape::CouplingForm::isotropic;
    } else {
      throw ConfigError("grape config: coupling_form must be 'weak' or 'isotropic'");
    }
    for (const auto& ch : jh.at("channels")) {
      grape::RfChannel channel;
      channel.name = ch.at("name").get<std::string>();
      for (const auto& s : ch.at("spins")) channel.spins.push_back(index(s.get<std::string>()));
      h.channels.push_back(std::move(channel));
    }

    cfg.problem.duration = j.at("duration_s").get<double>();
    cfg.problem.slices = j.at("slices").get<int>();
    cfg.problem.max_amplitude = j.at("max_amplitude_hz").get<double>();
    if (j.contains("rf_scales")) {
      cfg.problem.rf_scales.clear();
      for (const auto& s : j.at("rf_scales")) {
        cfg.problem.rf_scales.push_back({s.at("scale").get<double>(), s.value("weight", 1.0)});
      }
    } else {
      cfg.problem.rf_scales = grape::default_rf_scales();
    }
    const auto& obj = j.at("objective");
    const auto init = obj.at("initial").get<std::vector<double>>();
    const auto target = obj.at("target").get<std::vector<double>>();
    if (init.size() != n || target.size() != n) {
      throw ConfigError("grape config: objective polarization lists need one entry per spin");
    }
    cfg.problem.initial = grape::deviation_vector(init);
    cfg.problem.target = grape::deviation_vector(target);

    const auto opt = j.value("optimizer", json::object());
    cfg.optimizer.max_iters = opt.value("max_iters", cfg.optimizer.max_iters);
    cfg.optimizer.tol = opt.value("tol", cfg.optimizer.tol);
    cfg.optimizer.initial_step = opt.value("initial_step", cfg.optimizer.initial_step);
    cfg.optimizer.min_step = opt.value("min_step", cfg.optimizer.min_step);
    cfg.optimizer.lbfgs_memory = opt.value("lbfgs_memory", cfg.optimizer.lbfgs_memory);
    const auto rule = opt.value("step_rule", std::string("lbfgs"));
    if (rule == "lbfgs") {
      cfg.optimizer.rule = grape::StepRule::lbfgs;
    } else if (rule == "steepest") {
      cfg.optimizer.rule = grape::StepRule::steepest;
    } else {
      throw ConfigError("grape config: step_rule must be 'lbfgs' or 'steepest'");
    }
    cfg.init_fraction = opt.value("init_fraction", cfg.init_fraction);
    if (opt.contains("require_fidelity")) cfg.require_fidelity = opt.at("require_fidelity").get<double>();
    cfg.seed = j.value("seed", std::uint64_t{1});
  } catch (const json::exception& e) {
    throw ConfigError(std::string("grape config: ") + e.what());
  }
  try {
    cfg.problem.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("grape config: ") + e.what());
  }
  return cfg;
}

GrapeConfig load_grape_config(const std::filesystem::path& path) {
  try {
    return parse_grape_config(read_text(path));
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    if (msg.find(path.string()) != std::string::npos) throw;
    throw ConfigError(path.string() + ": " + msg);
  }
}

std::string pulse_to_json(const grape::ControlPulse& pulse, const grape::GrapeProblem& problem) {
  json j;
  j["duration_s"] = pulse.duration;
  j["slices"] = pulse.amplitudes.rows();
  j["max_amplitude_hz"] = problem.max_amplitude;
  j["table"] = json::array();
  const auto& chans = problem.hamiltonian.channels;
  for (Eigen::Index k = 0; k < pulse.amplitudes.rows(); ++k) {
    for (std::size_t c = 0; c < chans.size(); ++c) {
      const auto col = static_cast<Eigen::Index>(2 * c);
      j["table"].push_back({{"slice", k},
                            {"channel", chans[c].name},
                            {"x_hz", pulse.amplitudes(k, col)},
                            {"y_hz", pulse.amplitudes(k, col + 1)}});
    }
  }
  j["fidelities"] = json::array();
  for (std::size_t s = 0; s < pulse.scale_fidelities.size() && s < problem.rf_scales.size(); ++s) {
    j["fidelities"].push_back({{"rf_scale", problem.rf_scales[s].scale},
                               {"weight", problem.rf_scales[s].weight},
                               {"fidelity", pulse.scale_fidelities[s]}});
  }
  j["fidelity_trace"] = pulse.fidelity_trace;
  j["iterations"] = pulse.iterations;
  j["stagnated"] = pulse.stagnated;
  return j.dump(2) + "\n";
}

std::string pulse_to_csv(const grape::ControlPulse& pulse, const grape::GrapeProblem& problem) {
  std::ostringstream os;
  os << "slice,t_start_s,channel,x_hz,y_hz\n";
  const double dt = problem.slice_duration();
  const auto& chans = problem.hamiltonian.channels;
  for (Eigen::Index k = 0; k < pulse.amplitudes.rows(); ++k) {
    for (std::size_t c = 0; c < chans.size(); ++c) {
      const auto col = static_cast<Eigen::Index>(2 * c);
      os << k << ',' << format_g6(static_cast<double>(k) * dt) << ',' << csv_field(chans[c].name) << ','
         << format_g6(pulse.amplitudes(k, col)) << ',' << format_g6(pulse.amplitudes(k, col + 1)) << '\n';
    }
  }
  return os.str();
}

}  // namespace algcool::io
