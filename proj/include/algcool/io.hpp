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
#include <filesystem>
#include <optional>
#include <string>

#include "algcool/engine.hpp"
#include "algcool/grape.hpp"
#include "algcool/spin_system.hpp"

namespace algcool::io {

/// Whole file as text; throws ConfigError naming the path when unreadable.
std::string read_text(const std::filesystem::path& path);

/// Writes via a temporary file and rename so a failed run never leaves a partial output.
void write_text(const std::filesystem::path& path, const std::string& text);

/// {label, eps_unit, spins: [{name, gamma_rel, t1_s, t2star_s, rf_channel}]}
SpinSystemPtr parse_system(const std::string& json_text);
SpinSystemPtr load_system(const std::filesystem::path& path);
std::string system_to_json(const SpinSystem& system);

/// CSV with header round,time_s,pol_<spin>...,ic_<spin>...,ic_total,ic_exact_bits,event
/// (6 significant digits).
std::string trajectory_to_csv(const Trajectory& traj);
/// JSON mirror of the CSV at full precision.
std::string trajectory_to_json(const Trajectory& traj);

std::string scan_surface_to_csv(const ScanResult& result);
std::string scan_optimum_to_json(const ScanResult& result, const std::vector<std::string>& objective_spins);

struct GrapeConfig {
  grape::GrapeProblem problem;
  grape::OptimizerConfig optimizer;
  std::uint64_t seed = 1;
  double init_fraction = 0.3;
  std::optional<double> require_fidelity;  // mean fidelity below this is a numerical failure
};

GrapeConfig parse_grape_config(const std::string& json_text);
GrapeConfig load_grape_config(const std::filesystem::path& path);

/// Slice table (channel, x_hz, y_hz), duration, per-scale fidelities and iteration trace.
std::string pulse_to_json(const grape::ControlPulse& pulse, const grape::GrapeProblem& problem);
/// slice,t_start_s,channel,x_hz,y_hz
std::string pulse_to_csv(const grape::ControlPulse& pulse, const grape::GrapeProblem& problem);

/// "%.6g" formatting used by every CSV writer.
std::string format_g6(double v);

}  // namespace algcool::io
