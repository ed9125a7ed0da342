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

#include "algcool/engine.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "algcool/errors.hpp"
#include "algcool/relaxation.hpp"
#include "algcool/thermo.hpp"

namespace algcool {

std::map<std::string, double> default_delays(int kind) {
  switch (kind) {
    case 1: return {{"D2", 5.0}, {"D3", 3.0}};
    case 2: return {{"D2", 5.0}, {"D3", 3.0}, {"D4", 5.0}};
    case 3: return {{"D2", 5.0}, {"D3", 3.0}, {"D4", 6.0}, {"D5", 6.0}};
    default: throw ConfigError("process kind must be 1, 2 or 3, got " + std::to_string(kind));
  }
}

PulseSequence build_process(SpinSystemPtr system, int kind, const std::map<std::string, double>& delays,
                            int rounds, const ProcessSpins& spins) {
  if (kind < 1 || kind > 3) throw ConfigError("process kind must be 1, 2 or 3, got " + std::to_string(kind));
  if (rounds < 0) throw ConfigError("rounds must be >= 0");

  std::vector<std::string> needed = {"D2", "D3"};
  if (kind >= 2) needed.push_back("D4");
  if (kind == 3) needed.push_back("D5");

  PulseSequence seq;
  seq.system = system;
  seq.label = "process-" + std::to_string(kind);
  for (const auto& name : needed) {
    auto it = delays.find(name);
    if (it == delays.end()) {
      throw ConfigError("process " + std::to_string(kind) + " needs delay " + name);
    }
    if (!(it->second >= 0.0) || !std::isfinite(it->second)) {
      throw ConfigError("delay " + name + " must be finite and >= 0");
    }
    seq.delays[name] = it->second;
  }

  auto pe_step = [&] { return SequenceStep{ApplyGate{pe(system, spins.reset, spins.partner), GateRole::pe}}; };

  if (rounds > 0) {
    Repeat round;
    round.count = rounds;
    round.body.push_back({Wait{seq.delays["D2"]}});
    round.body.push_back(pe_step());
    round.body.push_back({Wait{seq.delays["D3"]}});
    round.body.push_back(
        {ApplyGate{comp(system, spins.target, spins.partner, spins.reset), GateRole::comp}});
    seq.steps.push_back({std::move(round)});
  }
  if (kind >= 2) {
    seq.steps.push_back({Wait{seq.delays["D4"]}});
    seq.steps.push_back(pe_step());
  }
  if (kind == 3) seq.steps.push_back({Wait{seq.delays["D5"]}});

  Measure all;
  for (const auto& s : system->spins()) all.spins.push_back(s.name);
  seq.steps.push_back({std::move(all)});
  return seq;
}

std::vector<const TrajectoryRecord*> Trajectory::round_records() const {
  std::vector<const TrajectoryRecord*> out;
  for (const auto& r : records) {
    if (r.kind != RecordKind::measure) out.push_back(&r);
  }
  return out;
}

std::size_t Trajectory::spin_index(const std::string& name) const {
  for (std::size_t i = 0; i < spins.size(); ++i) {
    if (spins[i] == name) return i;
  }
  throw LookupError("trajectory has no spin '" + name + "'");
}

namespace {

std::string format_seconds(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

class Executor {
 public:
  Executor(const GateModel& model, DiagonalState initial) : model_(model), state_(std::move(initial)) {
    model_.validate();
    for (const auto& s : state_.system().spins()) traj_.spins.push_back(s.name);
    record(RecordKind::initial, "init");
  }

  void run_top(const std::vector<SequenceStep>& steps) {
    for (const auto& step : steps) {
      if (const auto* rep = std::get_if<Repeat>(&step.node)) {
        for (int k = 0; k < rep->count; ++k) {
          exec(rep->body, 1);
          ++round_;
          record(RecordKind::round, last_event_);
        }
      } else {
        exec_one(step, 0);
      }
    }
  }

  RunResult finish() && { return {std::move(traj_), std::move(state_)}; }

 private:
  void exec(const std::vector<SequenceStep>& steps, int depth) {
    for (const auto& step : steps) exec_one(step, depth);
  }

  void exec_one(const SequenceStep& step, int depth) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Wait>) {
            state_ = relax(state_, node.seconds);
            time_ += node.seconds;
            last_event_ = "wait " + format_seconds(node.seconds);
          } else if constexpr (std::is_same_v<T, ApplyGate>) {
            state_ = apply(node.gate, state_, eta_for(node.role), model_.scope);
            last_event_ = node.gate.label();
          } else if constexpr (std::is_same_v<T, Measure>) {
            std::string label = "measure:";
            for (std::size_t i = 0; i < node.spins.size(); ++i) {
              if (i) label += ",";
              label += node.spins[i];
            }
            last_event_ = label;
            record(RecordKind::measure, label);
          } else {
            if (depth >= PulseSequence::kMaxDepth) throw ParameterError("repeat nesting too deep");
            for (int k = 0; k < node.count; ++k) exec(node.body, depth + 1);
          }
        },
        step.node);
  }

  double eta_for(GateRole role) const {
    switch (role) {
      case GateRole::pe: return model_.eta_pe;
      case GateRole::comp: return model_.eta_comp;
      case GateRole::ideal: return 1.0;
    }
    return 1.0;
  }

  void record(RecordKind kind, const std::string& event) {
    TrajectoryRecord r;
    r.round = round_;
    r.time_s = time_;
    r.pol = marginal_polarizations(state_);
    const auto rep = thermo::ic_report(state_);
    for (const auto& [name, ic] : rep.per_spin_ic) r.ic.push_back(ic);
    r.ic_total = rep.total_ic_leading;
    r.ic_exact_bits = rep.exact_ic_bits;
    r.event = event;
    r.kind = kind;
    traj_.records.push_back(std::move(r));
  }

  GateModel model_;
  DiagonalState state_;
  Trajectory traj_;
  double time_ = 0.0;
  int round_ = 0;
  std::string last_event_ = "init";
};

}  // namespace

RunResult run_with_state(const PulseSequence& seq, const GateModel& model, const DiagonalState& initial) {
  if (!seq.system || !(*seq.system == initial.system())) {
    throw ParameterError("sequence and initial state belong to different spin systems");
  }
  Executor ex(model, initial);
  ex.run_top(seq.steps);
  return std::move(ex).finish();
}

Trajectory run(const PulseSequence& seq, const GateModel& model, const DiagonalState& initial) {
  return run_with_state(seq, model, initial).trajectory;
}

std::optional<int> detect_limit_cycle(const Trajectory& traj, double tol) {
  const auto rounds = traj.round_records();
  for (std::size_t r = 1; r < rounds.size(); ++r) {
    double worst = 0.0;
    for (std::size_t i = 0; i < rounds[r]->pol.size(); ++i) {
      worst = std::max(worst, std::abs(rounds[r]->pol[i] - rounds[r - 1]->pol[i]));
    }
    if (worst < tol) return rounds[r]->round;
  }
  return std::nullopt;
}

std::vector<double> DelayAxis::values() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ParameterError("grid step for " + name + " must be > 0");
  if (!(min >= 0.0) || !std::isfinite(min) || !std::isfinite(max)) {
    throw ParameterError("grid bounds for " + name + " must be finite and >= 0");
  }
  std::vector<double> v;
  const double slack = 1e-9 * step;
  for (long long k = 0;; ++k) {
    const double x = min + static_cast<double>(k) * step;
    if (x > max + slack) break;
    v.push_back(x);
  }
  return v;
}

namespace {

struct ScanPlan {
  std::vector<std::string> names;
  std::vector<std::vector<double>> grid;  // per-point delay tuples
  std::vector<std::size_t> objective_idx;
  std::map<std::string, double> base;
};

ScanPlan plan_scan(const SpinSystem& sys, const ScanRequest& req) {
  if (req.axes.empty()) throw ParameterError("scan grid is empty");
  if (req.objective_spins.empty()) throw ParameterError("scan objective needs at least one spin");
  req.model.validate();
  ScanPlan plan;
  for (const auto& s : req.objective_spins) {
    if (!sys.contains(s)) throw ParameterError("objective spin '" + s + "' is not in the system");
    plan.objective_idx.push_back(sys.index_of(s));
  }
  plan.base = default_delays(req.kind);
  for (const auto& [k, v] : req.fixed_delays) plan.base[k] = v;

  std::vector<std::vector<double>> axis_values;
  for (const auto& axis : req.axes) {
    plan.names.push_back(axis.name);
    axis_values.push_back(axis.values());
    if (axis_values.back().empty()) throw ParameterError("scan axis " + axis.name + " has no points");
  }
  // lexicographic cartesian product, first axis slowest
  std::vector<std::size_t> idx(axis_values.size(), 0);
  while (true) {
    std::vector<double> point;
    for (std::size_t a = 0; a < idx.size(); ++a) point.push_back(axis_values[a][idx[a]]);
    plan.grid.push_back(std::move(point));
    std::size_t a = idx.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axis_values[a].size()) break;
      idx[a] = 0;
      if (a == 0) return plan;
    }
  }
}

double evaluate_point(const SpinSystemPtr& system, const ScanRequest& req, const ScanPlan& plan,
                      const std::vector<double>& point) {
  auto delays = plan.base;
  for (std::size_t a = 0; a < point.size(); ++a) delays[plan.names[a]] = point[a];
  const auto seq = build_process(system, req.kind, delays, req.rounds, req.spins);
  const auto traj = run(seq, req.model, equilibrium_state(system));
  double obj = 0.0;
  for (auto i : plan.objective_idx) obj += traj.final_record().ic[i];
  return obj;
}

ScanResult finish_scan(const ScanPlan& plan, std::vector<double> values) {
  ScanResult res;
  res.axis_names = plan.names;
  for (std::size_t k = 0; k < plan.grid.size(); ++k) {
    res.surface.push_back({plan.grid[k], values[k]});
    // grid order is lexicographic, so strict '>' keeps the smallest tuple on ties
    if (k == 0 || values[k] > res.best.objective) res.best = res.surface.back();
  }
  for (std::size_t a = 0; a < plan.names.size(); ++a) res.best_delays[plan.names[a]] = res.best.delays[a];
  return res;
}

}  // namespace

ScanResult scan_delays_serial(SpinSystemPtr system, const ScanRequest& request) {
  const auto plan = plan_scan(*system, request);
  std::vector<double> values(plan.grid.size());
  for (std::size_t k = 0; k < plan.grid.size(); ++k) values[k] = evaluate_point(system, request, plan, plan.grid[k]);
  return finish_scan(plan, std::move(values));
}

ScanResult scan_delays(SpinSystemPtr system, const ScanRequest& request) {
  const auto plan = plan_scan(*system, request);
  const auto n = static_cast<std::int64_t>(plan.grid.size());
  std::vector<double> values(plan.grid.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < n; ++k) {
    try {
      values[static_cast<std::size_t>(k)] = evaluate_point(system, request, plan, plan.grid[static_cast<std::size_t>(k)]);
    } catch (...) {
#pragma omp critical(algcool_scan_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return finish_scan(plan, std::move(values));
}

}  // namespace algcool
