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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "algcool/gates.hpp"
#include "algcool/spin_system.hpp"

namespace algcool {

/// Which GateModel efficiency applies to a gate.
enum class GateRole { pe, comp, ideal };

const char* to_string(GateRole role);

struct SequenceStep;

struct Wait {
  double seconds = 0.0;
};

struct ApplyGate {
  Gate gate;
  GateRole role = GateRole::ideal;
};

struct Measure {
  std::vector<std::string> spins;
};

struct Repeat {
  int count = 1;
  std::vector<SequenceStep> body;
};

struct SequenceStep {
  std::variant<Wait, ApplyGate, Measure, Repeat> node;
};

/// Validated program of waits, gates, measurements and repeats bound to one system.
struct PulseSequence {
  static constexpr int kMaxDepth = 16;

  SpinSystemPtr system;
  std::vector<SequenceStep> steps;
  std::string label;
  std::map<std::string, double> delays;  // D1..D5 when built from a process template
};

/// Parse the sequence DSL:
///
///   sequence := stmt*
///   stmt     := "wait" NUMBER ";" | "pe" ID ID ";" | "comp" ID ID ID ";"
///             | "measure" ID+ ";" | "repeat" INT "{" stmt* "}"
///
/// `#` starts a comment running to end of line. Throws ParseError with the
/// 1-based line and column of the offending token.
PulseSequence parse_sequence(std::string_view text, SpinSystemPtr system);

/// Canonical DSL text for a sequence (two-space indentation, one statement per line).
/// parse_sequence(format_sequence(s)) reproduces s.
std::string format_sequence(const PulseSequence& sequence);

bool operator==(const SequenceStep& a, const SequenceStep& b);

}  // namespace algcool
