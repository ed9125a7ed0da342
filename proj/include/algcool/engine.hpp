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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algcool/gates.hpp"
#include "algcool/sequence.hpp"
#include "algcool/spin_system.hpp"

namespace algcool {

/// Spin roles used by the process templates.
struct ProcessSpins {
  std::string reset = "H";     // fast-relaxing spin
  std::string partner = "C2";  // receives the reset spin's polarization by PE
  std::string target = "C1";   // compression target
};

/// Caption delays for process 1, 2 or 3 (seconds).
std::map<std::string, double> default_delays(int kind);

/// Process templates:
///   1: rounds x [wait D2; PE(reset->partner); wait D3; COMP(target; partner, reset)]
///   2: process 1, then [wait D4; PE(reset->partner)]
///   3: process 2, then [wait D5]
/// followed by a measurement of every spin. Missing delays throw ConfigError.
PulseSequence build_process(SpinSystemPtr system, int kind, const std::map<std::string, double>& delays,
                            int rounds, const ProcessSpins& spins = {});

enum class RecordKind { initial, round, measure };

struct TrajectoryRecord {
  int round = 0;
  double time_s = 0.0;
  std::vector<double> pol;  // per spin, eps_unit units
  std::vector<double> ic;   // per spin, eps_unit^2 / ln4
  double ic_total = 0.0;
  double ic_exact_bits = 0.0;
  std::string event;
  RecordKind kind = RecordKind::initial;

  bool operator==(const TrajectoryRecord&) const = default;
};

struct Trajectory {
  std::vector<std::string> spins;
  std::vector<TrajectoryRecord> records;

  /// Records with kind initial or round, in order (round 0 first).
  std::vector<const TrajectoryRecord*> round_records() const;
  const TrajectoryRecord& final_record() const { return records.back(); }
  std::size_t spin_index(const std::string& name) const;

  bool operator==(const Trajectory&) const = default;
};

struct RunResult {
  Trajectory trajectory;
  DiagonalState final_state;
};

/// Execute a sequence from `initial`.
///
/// Every iteration of a top-level `repeat` is one cooling round and produces a
/// round record after its last step; each `measure` produces a measure record.
RunResult run_with_state(const PulseSequence& seq, const GateModel& model, const DiagonalState& initial);
Trajectory run(const PulseSequence& seq, const GateModel& model, const DiagonalState& initial);

/// Smallest round r >= 1 with max_i |pol_i(r) - pol_i(r-1)| < tol, if any.
std::optional<int> detect_limit_cycle(const Trajectory& traj, double tol);

struct DelayAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

struct ScanPoint {
  std::vector<double> delays;  // ordered like ScanRequest::axes
  double objective = 0.0;
};

struct ScanRequest {
  int kind = 1;
  std::vector<DelayAxis> axes;
  std::vector<std::string> objective_spins;  // objective = sum of pol^2 at the final record
  int rounds = 7;
  GateModel model;
  std::map<std::string, double> fixed_delays;  // defaults for delays not on the grid
  ProcessSpins spins;
};

struct ScanResult {
  std::vector<std::string> axis_names;
  std::vector<ScanPoint> surface;  // lexicographic grid order
  ScanPoint best;
  std::map<std::string, double> best_delays;
};

/// Exhaustive grid evaluation (OpenMP over grid points). Ties go to the
/// lexicographically smallest delay tuple; the result is independent of thread count.
ScanResult scan_delays(SpinSystemPtr system, const ScanRequest& request);

/// Single-threaded reference for scan_delays().
ScanResult scan_delays_serial(SpinSystemPtr system, const ScanRequest& request);

}  // namespace algcool
