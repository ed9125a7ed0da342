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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <fstream>
#include <random>
#include <sstream>

#include "algcool/errors.hpp"
#include "algcool/io.hpp"
#include "algcool/sequence.hpp"

using namespace algcool;
namespace fs = std::filesystem;

namespace {

struct Expectation {
  bool ok = true;
  std::string canonical;
  int line = 0;
  int column = 0;
  std::string fragment;
};

Expectation read_expectation(const fs::path& path) {
  const std::string text = io::read_text(path.string());
  Expectation e;
  if (text.rfind("ok\n", 0) == 0) {
    e.canonical = text.substr(3);
    return e;
  }
  e.ok = false;
  std::istringstream is(text);
  std::string word;
  std::string loc;
  is >> word >> loc;
  REQUIRE(word == "error");
  const auto colon = loc.find(':');
  e.line = std::stoi(loc.substr(0, colon));
  e.column = std::stoi(loc.substr(colon + 1));
  std::getline(is >> std::ws, e.fragment);
  return e;
}

std::vector<fs::path> corpus() {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(fs::path(ALGCOOL_TEST_DATA_DIR) / "seq")) {
    if (entry.path().extension() == ".seq") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// Random well-formed program over the TCE spins.
std::string random_program(std::mt19937_64& rng, int depth = 0) {
  static const char* spins[] = {"H", "C2", "C1"};
  std::uniform_int_distribution<int> kind(0, depth < 3 ? 4 : 3);
  std::uniform_int_distribution<int> len(0, 4);
  std::uniform_real_distribution<double> dur(0.0, 50.0);
  std::uniform_int_distribution<int> pick(0, 2);
  std::ostringstream os;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    switch (kind(rng)) {
      case 0:
        os << "wait " << std::setprecision(17) << dur(rng) << ";\n";
        break;
      case 1: {
        const int a = pick(rng);
        os << "pe " << spins[a] << ' ' << spins[(a + 1 + pick(rng) % 2) % 3] << ";\n";
        break;
      }
      case 2: {
        const int t = pick(rng);
        const int shift = 1 + pick(rng) % 2;
        os << "comp " << spins[t] << ' ' << spins[(t + shift) % 3] << ' ' << spins[(t + 3 - shift) % 3] << ";\n";
        break;
      }
      case 3:
        os << "measure " << spins[pick(rng)] << ' ' << spins[pick(rng)] << ";\n";
        break;
      default:
        os << "repeat " << 1 + pick(rng) << " {\n" << random_program(rng, depth + 1) << "}\n";
    }
  }
  return os.str();
}

}  // namespace

TEST_CASE("sequence corpus") {
  const auto tce = make_tce_system();
  const auto files = corpus();
  CHECK(files.size() >= 20);
  for (const auto& file : files) {
    CAPTURE(file.filename().string());
    auto exp_path = file;
    exp_path.replace_extension(".expected");
    const auto e = read_expectation(exp_path);
    const std::string src = io::read_text(file.string());
    if (e.ok) {
      const auto seq = parse_sequence(src, tce);
      CHECK(format_sequence(seq) == e.canonical);
      CHECK(parse_sequence(format_sequence(seq), tce).steps == seq.steps);
    } else {
      try {
        parse_sequence(src, tce);
        FAIL("expected a parse error");
      } catch (const ParseError& err) {
        CHECK(err.line() == e.line);
        CHECK(err.column() == e.column);
        CHECK(err.message().find(e.fragment) != std::string::npos);
      }
    }
  }
}

TEST_CASE("process-1 program structure") {
  const auto tce = make_tce_system();
  const auto seq = parse_sequence("repeat 7 { wait 5; pe H C2; wait 3; comp C1 C2 H; measure C1; }", tce);
  REQUIRE(seq.steps.size() == 1);
  const auto& rep = std::get<Repeat>(seq.steps[0].node);
  CHECK(rep.count == 7);
  REQUIRE(rep.body.size() == 5);
  CHECK(std::get<Wait>(rep.body[0].node).seconds == 5.0);
  const auto& pe_step = std::get<ApplyGate>(rep.body[1].node);
  CHECK(pe_step.role == GateRole::pe);
  CHECK(pe_step.gate == pe(tce, "H", "C2"));
  CHECK(std::get<Wait>(rep.body[2].node).seconds == 3.0);
  const auto& comp_step = std::get<ApplyGate>(rep.body[3].node);
  CHECK(comp_step.role == GateRole::comp);
  CHECK(comp_step.gate == comp(tce, "C1", "C2", "H"));
  CHECK(std::get<Measure>(rep.body[4].node).spins == std::vector<std::string>{"C1"});
  CHECK(seq.system == tce);
}

TEST_CASE("trivial programs") {
  const auto tce = make_tce_system();
  CHECK(parse_sequence("", tce).steps.empty());
  CHECK(format_sequence(parse_sequence("", tce)).empty());
  try {
    parse_sequence("wait -1;", tce);
    FAIL("negative wait accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).rfind("1:6: ", 0) == 0);
  }
  CHECK_THROWS_AS(parse_sequence("wait 1;", nullptr), ParameterError);
  CHECK(std::string(to_string(GateRole::ideal)) == "ideal");
}

TEST_CASE("property: format/parse round trip") {
  std::mt19937_64 rng(41);
  const auto tce = make_tce_system();
  for (int trial = 0; trial < 300; ++trial) {
    const auto src = random_program(rng);
    const auto seq = parse_sequence(src, tce);
    const auto text = format_sequence(seq);
    const auto again = parse_sequence(text, tce);
    CHECK(again.steps == seq.steps);
    CHECK(format_sequence(again) == text);
  }
}

TEST_CASE("step equality distinguishes nodes") {
  const auto tce = make_tce_system();
  const auto a = parse_sequence("pe H C2;", tce).steps;
  const auto b = parse_sequence("pe C2 H;", tce).steps;
  const auto c = parse_sequence("wait 1;", tce).steps;
  CHECK_FALSE(a == b);
  CHECK_FALSE(a == c);
  CHECK(parse_sequence("repeat 2 { wait 1; }", tce).steps != parse_sequence("repeat 3 { wait 1; }", tce).steps);
}
