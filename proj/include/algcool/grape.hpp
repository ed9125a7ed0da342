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

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "algcool/spin_system.hpp"

namespace algcool::grape {

using Matrix = Eigen::MatrixXcd;

enum class CouplingForm {
  weak,       // 2 pi J Iz Iz
  isotropic,  // 2 pi J (Ix Ix + Iy Iy + Iz Iz)
};

struct RfChannel {
  std::string name;
  std::vector<std::size_t> spins;  // indices into HamiltonianSpec::spins
};

/// Rotating-frame spin Hamiltonian: offsets and couplings in Hz, controls grouped by RF channel.
struct HamiltonianSpec {
  std::vector<std::string> spins;
  std::vector<double> offsets_hz;
  Eigen::MatrixXd j_hz;  // symmetric, zero diagonal
  CouplingForm coupling = CouplingForm::weak;
  std::vector<RfChannel> channels;

  std::size_t n_spins() const { return spins.size(); }
  std::size_t n_channels() const { return channels.size(); }
  std::size_t dimension() const { return std::size_t{1} << spins.size(); }

  /// Throws ConfigError on non-finite offsets, asymmetric J, or a spin that is
  /// not in exactly one channel.
  void validate() const;
};

struct RfScale {
  double scale = 1.0;
  double weight = 1.0;
};

/// Default RF robustness ensemble: +-15 % with equal weights.
std::vector<RfScale> default_rf_scales();

/// State-to-state transfer problem. `initial` and `target` are traceless
/// diagonal deviations (any common scale).
struct GrapeProblem {
  HamiltonianSpec hamiltonian;
  Eigen::VectorXd initial;
  Eigen::VectorXd target;
  double duration = 0.0;  // s
  int slices = 1;
  std::vector<RfScale> rf_scales = {{1.0, 1.0}};
  double max_amplitude = 0.0;  // Hz

  double slice_duration() const { return duration / slices; }
  std::size_t n_controls() const { return 2 * hamiltonian.n_channels(); }
  void validate() const;
};

/// Piecewise-constant RF amplitudes: row = slice, columns (x, y) per channel, in Hz.
struct ControlPulse {
  Eigen::MatrixXd amplitudes;
  double duration = 0.0;
  std::vector<double> fidelity_trace;
  std::vector<double> scale_fidelities;
  int iterations = 0;
  bool stagnated = false;
};

ControlPulse zero_pulse(const GrapeProblem& problem);

/// Uniform random amplitudes in [-fraction, fraction] * max_amplitude, clipped to the amplitude disc.
ControlPulse random_pulse(const GrapeProblem& problem, std::uint64_t seed, double fraction = 0.3);

/// Traceless deviation of a diagonal state (deviation-diagonal values).
Eigen::VectorXd deviation_vector(const DiagonalState& state);

/// Leading-order deviation sum_i pol_i s_i(x) of a product state.
Eigen::VectorXd deviation_vector(std::span<const double> pols);

/// H = sum_j 2 pi nu_j Iz_j + couplings + rf_scale * sum_c 2 pi (u_x Ix_c + u_y Iy_c).
/// `controls` holds (x, y) per channel in Hz.
Matrix build_hamiltonian(const HamiltonianSpec& spec, std::span<const double> controls, double rf_scale);

struct Propagation {
  Matrix total;               // U_N ... U_1
  std::vector<Matrix> slices;  // U_1 ... U_N
};

Propagation propagate(const ControlPulse& pulse, const GrapeProblem& problem, double rf_scale = 1.0);

/// Normalized Hilbert-Schmidt overlap <T, U D U^dag> / (|T| |D|) for general Hermitian D, T.
double transfer_overlap(const Matrix& propagator, const Matrix& initial, const Matrix& target);

/// Weighted ensemble fidelity <T, U D U^dag> / (|T| |D|), Hilbert-Schmidt on the deviations.
double fidelity(const ControlPulse& pulse, const GrapeProblem& problem);
std::vector<double> fidelity_per_scale(const ControlPulse& pulse, const GrapeProblem& problem);

/// Exact d fidelity / d amplitude (augmented-exponential slice derivatives),
/// OpenMP-parallel over slices. Same shape as pulse.amplitudes, units 1/Hz.
Eigen::MatrixXd gradient(const ControlPulse& pulse, const GrapeProblem& problem);

/// Single-threaded reference of gradient().
Eigen::MatrixXd gradient_serial(const ControlPulse& pulse, const GrapeProblem& problem);

enum class StepRule { steepest, lbfgs };

struct OptimizerConfig {
  int max_iters = 500;
  double tol = 1e-10;        // stop when an accepted step improves F by less than this
  StepRule rule = StepRule::lbfgs;
  double initial_step = 1.0;  // in units of max_amplitude
  double min_step = 1e-12;
  int lbfgs_memory = 10;
};

/// Monotone gradient ascent with backtracking (step halved until F improves) and
/// amplitude clipping after every update. Deterministic.
ControlPulse optimize(const GrapeProblem& problem, ControlPulse init, const OptimizerConfig& config);
ControlPulse optimize(const GrapeProblem& problem, std::uint64_t seed, const OptimizerConfig& config);

}  // namespace algcool::grape
