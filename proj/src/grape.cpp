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

#include "algcool/grape.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <random>

#include "algcool/errors.hpp"

namespace algcool::grape {

namespace {

using cd = std::complex<double>;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr cd kI{0.0, 1.0};

struct SpinOps {
  std::vector<Matrix> x, y, z;
};

SpinOps spin_operators(std::size_t n) {
  const std::size_t dim = std::size_t{1} << n;
  SpinOps ops;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t mask = std::size_t{1} << (n - 1 - j);
    Matrix ix = Matrix::Zero(dim, dim);
    Matrix iy = Matrix::Zero(dim, dim);
    Matrix iz = Matrix::Zero(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const bool down = r & mask;
      iz(r, r) = down ? -0.5 : 0.5;
      ix(r, r ^ mask) = 0.5;
      // <up|Iy|down> = -i/2, <down|Iy|up> = +i/2
      iy(r, r ^ mask) = down ? cd(0.0, 0.5) : cd(0.0, -0.5);
    }
    ops.x.push_back(std::move(ix));
    ops.y.push_back(std::move(iy));
    ops.z.push_back(std::move(iz));
  }
  return ops;
}

Matrix drift_hamiltonian(const HamiltonianSpec& spec, const SpinOps& ops) {
  const std::size_t n = spec.n_spins();
  Matrix h = Matrix::Zero(spec.dimension(), spec.dimension());
  for (std::size_t j = 0; j < n; ++j) h += kTwoPi * spec.offsets_hz[j] * ops.z[j];
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double jhz = spec.j_hz(j, k);
      if (jhz == 0.0) continue;
      Matrix term = ops.z[j] * ops.z[k];
      if (spec.coupling == CouplingForm::isotropic) term += ops.x[j] * ops.x[k] + ops.y[j] * ops.y[k];
      h += kTwoPi * jhz * term;
    }
  }
  return h;
}

// 2 pi sum Ix and 2 pi sum Iy per channel, interleaved (x0, y0, x1, y1, ...)
std::vector<Matrix> control_hamiltonians(const HamiltonianSpec& spec, const SpinOps& ops) {
  std::vector<Matrix> hc;
  for (const auto& ch : spec.channels) {
    Matrix hx = Matrix::Zero(spec.dimension(), spec.dimension());
    Matrix hy = Matrix::Zero(spec.dimension(), spec.dimension());
    for (auto j : ch.spins) {
      hx += kTwoPi * ops.x[j];
      hy += kTwoPi * ops.y[j];
    }
    hc.push_back(std::move(hx));
    hc.push_back(std::move(hy));
  }
  return hc;
}

struct Compiled {
  Matrix drift;
  std::vector<Matrix> controls;
  Eigen::VectorXd initial;
  Eigen::VectorXd target;
  double norm = 1.0;  // |T| |D|
  std::vector<RfScale> scales;  // weights normalized
  double dt = 0.0;
  int slices = 0;
  std::size_t dim = 0;
};

Compiled compile(const GrapeProblem& problem) {
  problem.validate();
  Compiled c;
  const auto ops = spin_operators(problem.hamiltonian.n_spins());
  c.drift = drift_hamiltonian(problem.hamiltonian, ops);
  c.controls = control_hamiltonians(problem.hamiltonian, ops);
  c.initial = problem.initial;
  c.target = problem.target;
  c.norm = problem.initial.norm() * problem.target.norm();
  double wsum = 0.0;
  for (const auto& s : problem.rf_scales) wsum += s.weight;
  for (const auto& s : problem.rf_scales) c.scales.push_back({s.scale, s.weight / wsum});
  c.dt = problem.slice_duration();
  c.slices = problem.slices;
  c.dim = problem.hamiltonian.dimension();
  return c;
}

void check_pulse(const ControlPulse& pulse, const GrapeProblem& problem) {
  if (pulse.amplitudes.rows() != problem.slices ||
      pulse.amplitudes.cols() != static_cast<Eigen::Index>(problem.n_controls())) {
    throw ParameterError("pulse is " + std::to_string(pulse.amplitudes.rows()) + "x" +
                         std::to_string(pulse.amplitudes.cols()) + " but the problem needs " +
                         std::to_string(problem.slices) + "x" + std::to_string(problem.n_controls()));
  }
}

Matrix slice_hamiltonian(const Compiled& c, const Eigen::MatrixXd& amp, int k, double scale) {
  Matrix h = c.drift;
  for (std::size_t q = 0; q < c.controls.size(); ++q) {
    const double u = amp(k, static_cast<Eigen::Index>(q));
    if (u != 0.0) h += (scale * u) * c.controls[q];
  }
  return h;
}

Matrix expm(const Matrix& a) { return a.exp(); }

std::vector<Matrix> slice_propagators(const Compiled& c, const Eigen::MatrixXd& amp, double scale,
                                      bool parallel) {
  std::vector<Matrix> u(static_cast<std::size_t>(c.slices));
#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k < c.slices; ++k) {
    u[static_cast<std::size_t>(k)] = expm((-kI * c.dt) * slice_hamiltonian(c, amp, k, scale));
  }
  return u;
}

Matrix diag_matrix(const Eigen::VectorXd& d) {
  return d.cast<cd>().asDiagonal();
}

// Re tr(T rho) for real diagonal T
double overlap(const Eigen::VectorXd& t, const Matrix& rho) {
  double s = 0.0;
  for (Eigen::Index x = 0; x < t.size(); ++x) s += t(x) * rho(x, x).real();
  return s;
}

double scale_fidelity(const Compiled& c, const Eigen::MatrixXd& amp, double scale, bool parallel) {
  const auto u = slice_propagators(c, amp, scale, parallel);
  Matrix total = Matrix::Identity(c.dim, c.dim);
  for (const auto& uk : u) total = uk * total;
  const Matrix rho = total * diag_matrix(c.initial) * total.adjoint();
  return overlap(c.target, rho) / c.norm;
}

double ensemble_fidelity(const Compiled& c, const Eigen::MatrixXd& amp, bool parallel) {
  double f = 0.0;
  for (const auto& s : c.scales) f += s.weight * scale_fidelity(c, amp, s.scale, parallel);
  return f;
}

// Fidelity and exact gradient over the ensemble.
double value_and_gradient(const Compiled& c, const Eigen::MatrixXd& amp, Eigen::MatrixXd& grad, bool parallel) {
  const int n_slices = c.slices;
  const auto n_ctrl = c.controls.size();
  const auto d = static_cast<Eigen::Index>(c.dim);
  grad = Eigen::MatrixXd::Zero(n_slices, static_cast<Eigen::Index>(n_ctrl));
  double f_total = 0.0;

  for (const auto& s : c.scales) {
    std::vector<Matrix> u(static_cast<std::size_t>(n_slices));
    std::vector<std::vector<Matrix>> du(static_cast<std::size_t>(n_slices));

#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 0; k < n_slices; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const Matrix a = (-kI * c.dt) * slice_hamiltonian(c, amp, k, s.scale);
      if (n_ctrl == 0) {
        u[kk] = expm(a);
        continue;
      }
      du[kk].resize(n_ctrl);
      Matrix aug = Matrix::Zero(2 * d, 2 * d);
      aug.topLeftCorner(d, d) = a;
      aug.bottomRightCorner(d, d) = a;
      for (std::size_t q = 0; q < n_ctrl; ++q) {
        aug.topRightCorner(d, d) = (-kI * c.dt * s.scale) * c.controls[q];
        const Matrix e = expm(aug);
        if (q == 0) u[kk] = e.topLeftCorner(d, d);
        du[kk][q] = e.topRightCorner(d, d);
      }
    }

    // rho[k] = state after k slices; lambda[k] = target pulled back through slices k+1..N
    std::vector<Matrix> rho(static_cast<std::size_t>(n_slices) + 1);
    std::vector<Matrix> lam(static_cast<std::size_t>(n_slices) + 1);
    rho[0] = diag_matrix(c.initial);
    for (int k = 0; k < n_slices; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      rho[kk + 1] = u[kk] * rho[kk] * u[kk].adjoint();
    }
    lam[static_cast<std::size_t>(n_slices)] = diag_matrix(c.target);
    for (int k = n_slices; k > 0; --k) {
      const auto kk = static_cast<std::size_t>(k);
      lam[kk - 1] = u[kk - 1].adjoint() * lam[kk] * u[kk - 1];
    }
    f_total += s.weight * overlap(c.target, rho[static_cast<std::size_t>(n_slices)]) / c.norm;

    const double factor = 2.0 * s.weight / c.norm;
#pragma omp parallel for schedule(static) if (parallel)
    for (int k = 0; k < n_slices; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      // d/du tr(L U R U^dag) = 2 Re tr(L dU R U^dag) for Hermitian L, R
      const Matrix right = rho[kk] * u[kk].adjoint();
      for (std::size_t q = 0; q < n_ctrl; ++q) {
        const Matrix left = lam[kk + 1] * du[kk][q];
        grad(k, static_cast<Eigen::Index>(q)) += factor * left.cwiseProduct(right.transpose()).sum().real();
      }
    }
  }
  return f_total;
}

void clip(Eigen::MatrixXd& amp, double max_amplitude) {
  for (Eigen::Index k = 0; k < amp.rows(); ++k) {
    for (Eigen::Index c = 0; c + 1 < amp.cols(); c += 2) {
      const double m = std::hypot(amp(k, c), amp(k, c + 1));
      if (m > max_amplitude) {
        const double f = max_amplitude / m;
        amp(k, c) *= f;
        amp(k, c + 1) *= f;
      }
    }
  }
}

double dot(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return a.cwiseProduct(b).sum(); }

}  // namespace

void HamiltonianSpec::validate() const {
  const std::size_t n = spins.size();
  if (n == 0 || n > 10) throw ConfigError("hamiltonian needs between 1 and 10 spins");
  if (offsets_hz.size() != n) throw ConfigError("one offset per spin is required");
  for (double o : offsets_hz) {
    if (!std::isfinite(o)) throw ConfigError("offsets must be finite");
  }
  if (j_hz.rows() != static_cast<Eigen::Index>(n) || j_hz.cols() != static_cast<Eigen::Index>(n)) {
    throw ConfigError("J matrix must be n x n");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (j_hz(a, a) != 0.0) throw ConfigError("J matrix must have a zero diagonal");
    for (std::size_t b = 0; b < n; ++b) {
      if (!std::isfinite(j_hz(a, b)) || j_hz(a, b) != j_hz(b, a)) {
        throw ConfigError("J matrix must be finite and symmetric");
      }
    }
  }
  std::vector<int> owners(n, 0);
  for (const auto& ch : channels) {
    for (auto j : ch.spins) {
      if (j >= n) throw ConfigError("channel '" + ch.name + "' refers to a spin index out of range");
      ++owners[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (owners[j] != 1) throw ConfigError("spin '" + spins[j] + "' must belong to exactly one RF channel");
  }
}

void GrapeProblem::validate() const {
  hamiltonian.validate();
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ParameterError("duration must be > 0");
  if (slices < 1) throw ParameterError("slices must be >= 1");
  if (!(max_amplitude > 0.0)) throw ParameterError("max_amplitude must be > 0");
  if (rf_scales.empty()) throw ParameterError("at least one RF scale is required");
  for (const auto& s : rf_scales) {
    if (!(s.scale > 0.0) || !(s.weight > 0.0)) throw ParameterError("RF scales and weights must be > 0");
  }
  const auto dim = static_cast<Eigen::Index>(hamiltonian.dimension());
  if (initial.size() != dim || target.size() != dim) {
    throw ParameterError("initial/target deviations must have 2^n entries");
  }
  if (!(initial.norm() > 0.0) || !(target.norm() > 0.0)) {
    throw DomainError("initial and target deviations must be nonzero");
  }
}

std::vector<RfScale> default_rf_scales() {
  return {{0.85, 1.0 / 3.0}, {1.0, 1.0 / 3.0}, {1.15, 1.0 / 3.0}};
}

ControlPulse zero_pulse(const GrapeProblem& problem) {
  ControlPulse p;
  p.amplitudes = Eigen::MatrixXd::Zero(problem.slices, static_cast<Eigen::Index>(problem.n_controls()));
  p.duration = problem.duration;
  return p;
}

ControlPulse random_pulse(const GrapeProblem& problem, std::uint64_t seed, double fraction) {
  ControlPulse p = zero_pulse(problem);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Eigen::Index k = 0; k < p.amplitudes.rows(); ++k) {
    for (Eigen::Index c = 0; c < p.amplitudes.cols(); ++c) {
      p.amplitudes(k, c) = fraction * problem.max_amplitude * dist(rng);
    }
  }
  clip(p.amplitudes, problem.max_amplitude);
  return p;
}

Eigen::VectorXd deviation_vector(const DiagonalState& state) {
  const auto d = deviation_diagonal(state);
  return Eigen::Map<const Eigen::VectorXd>(d.values.data(), static_cast<Eigen::Index>(d.values.size()));
}

Eigen::VectorXd deviation_vector(std::span<const double> pols) {
  const auto d = leading_order_deviation(pols.size(), pols);
  return Eigen::Map<const Eigen::VectorXd>(d.values.data(), static_cast<Eigen::Index>(d.values.size()));
}

Matrix build_hamiltonian(const HamiltonianSpec& spec, std::span<const double> controls, double rf_scale) {
  spec.validate();
  if (controls.size() != 2 * spec.n_channels()) {
    throw ParameterError("expected one (x, y) pair per RF channel");
  }
  const auto ops = spin_operators(spec.n_spins());
  Matrix h = drift_hamiltonian(spec, ops);
  const auto hc = control_hamiltonians(spec, ops);
  for (std::size_t q = 0; q < hc.size(); ++q) h += (rf_scale * controls[q]) * hc[q];
  return h;
}

Propagation propagate(const ControlPulse& pulse, const GrapeProblem& problem, double rf_scale) {
  check_pulse(pulse, problem);
  const auto c = compile(problem);
  Propagation out;
  out.slices = slice_propagators(c, pulse.amplitudes, rf_scale, true);
  out.total = Matrix::Identity(c.dim, c.dim);
  for (const auto& uk : out.slices) out.total = uk * out.total;
  return out;
}

double transfer_overlap(const Matrix& propagator, const Matrix& initial, const Matrix& target) {
  const double norm = initial.norm() * target.norm();
  if (!(norm > 0.0)) throw DomainError("initial and target deviations must be nonzero");
  const Matrix evolved = propagator * initial * propagator.adjoint();
  return (target.adjoint() * evolved).trace().real() / norm;
}

std::vector<double> fidelity_per_scale(const ControlPulse& pulse, const GrapeProblem& problem) {
  check_pulse(pulse, problem);
  const auto c = compile(problem);
  std::vector<double> out;
  for (const auto& s : c.scales) out.push_back(scale_fidelity(c, pulse.amplitudes, s.scale, true));
  return out;
}

double fidelity(const ControlPulse& pulse, const GrapeProblem& problem) {
  check_pulse(pulse, problem);
  return ensemble_fidelity(compile(problem), pulse.amplitudes, true);
}

Eigen::MatrixXd gradient(const ControlPulse& pulse, const GrapeProblem& problem) {
  check_pulse(pulse, problem);
  Eigen::MatrixXd g;
  value_and_gradient(compile(problem), pulse.amplitudes, g, true);
  return g;
}

Eigen::MatrixXd gradient_serial(const ControlPulse& pulse, const GrapeProblem& problem) {
  check_pulse(pulse, problem);
  Eigen::MatrixXd g;
  value_and_gradient(compile(problem), pulse.amplitudes, g, false);
  return g;
}

ControlPulse optimize(const GrapeProblem& problem, ControlPulse init, const OptimizerConfig& config) {
  check_pulse(init, problem);
  if (config.max_iters < 0) throw ParameterError("max_iters must be >= 0");
  if (!(config.initial_step > 0.0) || !(config.min_step > 0.0)) throw ParameterError("step sizes must be > 0");
  const auto c = compile(problem);
  const double amax = problem.max_amplitude;

  ControlPulse pulse = std::move(init);
  pulse.duration = problem.duration;
  pulse.fidelity_trace.clear();
  pulse.stagnated = false;
  pulse.iterations = 0;

  // work in units of max_amplitude so step sizes are dimensionless
  Eigen::MatrixXd v = pulse.amplitudes / amax;
  Eigen::MatrixXd g;
  double f = value_and_gradient(c, v * amax, g, true);
  g *= amax;
  pulse.fidelity_trace.push_back(f);

  std::deque<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> memory;  // (s, y) for the minimized -F
  double step = config.initial_step;

  for (int it = 0; it < config.max_iters; ++it) {
    Eigen::MatrixXd dir = g;
    if (config.rule == StepRule::lbfgs && !memory.empty()) {
      // two-loop recursion on -F, negated back into an ascent direction
      Eigen::MatrixXd q = -g;
      std::vector<double> alpha(memory.size());
      for (std::size_t m = memory.size(); m-- > 0;) {
        const auto& [s, y] = memory[m];
        alpha[m] = dot(s, q) / dot(y, s);
        q -= alpha[m] * y;
      }
      const auto& [s_last, y_last] = memory.back();
      q *= dot(s_last, y_last) / dot(y_last, y_last);
      for (std::size_t m = 0; m < memory.size(); ++m) {
        const auto& [s, y] = memory[m];
        const double beta = dot(y, q) / dot(y, s);
        q += (alpha[m] - beta) * s;
      }
      dir = -q;
      if (!(dot(dir, g) > 0.0)) {
        memory.clear();
        dir = g;
      }
    }
    if (config.rule == StepRule::lbfgs) {
      step = memory.empty() ? std::min(config.initial_step, 1.0 / std::max(g.norm(), 1e-300)) : 1.0;
    }

    Eigen::MatrixXd candidate;
    double fc = f;
    bool accepted = false;
    while (step >= config.min_step) {
      candidate = v + step * dir;
      clip(candidate, 1.0);
      fc = ensemble_fidelity(c, candidate * amax, true);
      if (fc > f) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      pulse.stagnated = true;
      break;
    }

    Eigen::MatrixXd g_new;
    value_and_gradient(c, candidate * amax, g_new, true);
    g_new *= amax;
    const Eigen::MatrixXd s = candidate - v;
    const Eigen::MatrixXd y = g - g_new;
    if (config.rule == StepRule::lbfgs && dot(s, y) > 1e-16 * s.squaredNorm()) {
      memory.emplace_back(s, y);
      if (static_cast<int>(memory.size()) > config.lbfgs_memory) memory.pop_front();
    }
    if (config.rule == StepRule::steepest) step *= 2.0;

    const double gain = fc - f;
    v = std::move(candidate);
    g = std::move(g_new);
    f = fc;
    pulse.fidelity_trace.push_back(f);
    pulse.iterations = it + 1;
    if (gain < config.tol) break;
  }

  if (pulse.iterations > 0) pulse.amplitudes = v * amax;
  pulse.scale_fidelities.clear();
  for (const auto& s : c.scales) pulse.scale_fidelities.push_back(scale_fidelity(c, pulse.amplitudes, s.scale, true));
  return pulse;
}

ControlPulse optimize(const GrapeProblem& problem, std::uint64_t seed, const OptimizerConfig& config) {
  return optimize(problem, random_pulse(problem, seed), config);
}

}  // namespace algcool::grape
