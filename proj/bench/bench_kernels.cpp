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


// Serial reference vs OpenMP kernels: GRAPE gradient, T1 relaxation, delay scan.

#include <benchmark/benchmark.h>

#include <random>

#include "algcool/engine.hpp"
#include "algcool/grape.hpp"
#include "algcool/io.hpp"
#include "algcool/parallel.hpp"
#include "algcool/relaxation.hpp"

namespace {

using namespace algcool;

const std::string kData = ALGCOOL_DATA_DIR;

const io::GrapeConfig& pe_config() {
  static const auto cfg = io::load_grape_config(kData + "/grape_pe_tce.json");
  return cfg;
}

void BM_GradientSerial(benchmark::State& state) {
  const auto& cfg = pe_config();
  const auto pulse = grape::random_pulse(cfg.problem, 1);
  for (auto _ : state) benchmark::DoNotOptimize(grape::gradient_serial(pulse, cfg.problem));
}

void BM_GradientParallel(benchmark::State& state) {
  const auto& cfg = pe_config();
  const auto pulse = grape::random_pulse(cfg.problem, 1);
  for (auto _ : state) benchmark::DoNotOptimize(grape::gradient(pulse, cfg.problem));
}

SpinSystemPtr wide_system(std::size_t n) {
  std::vector<Spin> spins;
  for (std::size_t i = 0; i < n; ++i) {
    spins.push_back({"S" + std::to_string(i), 1.0 + 0.25 * static_cast<double>(i), 1.0 + static_cast<double>(i), 0.1, "x"});
  }
  return std::make_shared<const SpinSystem>(std::move(spins), 1e-5, "bench");
}

void BM_RelaxSerial(benchmark::State& state) {
  const auto sys = wide_system(static_cast<std::size_t>(state.range(0)));
  const auto s = DiagonalState::uniform(sys);
  for (auto _ : state) benchmark::DoNotOptimize(relax_serial(s, 1.5));
}

void BM_RelaxParallel(benchmark::State& state) {
  const auto sys = wide_system(static_cast<std::size_t>(state.range(0)));
  const auto s = DiagonalState::uniform(sys);
  for (auto _ : state) benchmark::DoNotOptimize(relax(s, 1.5));
}

ScanRequest scan_request() {
  ScanRequest req;
  req.kind = 1;
  req.axes = {{"D2", 1, 10, 1}, {"D3", 1, 10, 1}};
  req.objective_spins = {"C1"};
  return req;
}

void BM_ScanSerial(benchmark::State& state) {
  const auto tce = make_tce_system();
  const auto req = scan_request();
  for (auto _ : state) benchmark::DoNotOptimize(scan_delays_serial(tce, req));
}

void BM_ScanParallel(benchmark::State& state) {
  const auto tce = make_tce_system();
  const auto req = scan_request();
  for (auto _ : state) benchmark::DoNotOptimize(scan_delays(tce, req));
}

}  // namespace

BENCHMARK(BM_GradientSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RelaxSerial)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RelaxParallel)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

int main(int argc, char** argv) {
  parallel::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
