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

#include "algcool/sequence.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "algcool/errors.hpp"

namespace algcool {

const char* to_string(GateRole role) {
  switch (role) {
    case GateRole::pe: return "pe";
    case GateRole::comp: return "comp";
    case GateRole::ideal: return "ideal";
  }
  return "?";
}

namespace {

enum class Tok { ident, number, lbrace, rbrace, semi, end };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    const int line = line_;
    const int col = col_;
    if (pos_ >= src_.size()) return {Tok::end, "end of input", line, col};
    const char c = src_[pos_];
    if (c == '{') return single(Tok::lbrace, line, col);
    if (c == '}') return single(Tok::rbrace, line, col);
    if (c == ';') return single(Tok::semi, line, col);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      return {Tok::ident, std::string(src_.substr(start, pos_ - start)), line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
      return number(line, col);
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token single(Tok kind, int line, int col) {
    std::string text(1, src_[pos_]);
    advance();
    return {kind, text, line, col};
  }

  bool digit_at(std::size_t p) const {
    return p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]));
  }

  Token number(int line, int col) {
    const std::size_t start = pos_;
    if (src_[pos_] == '-' || src_[pos_] == '+') advance();
    bool digits = false;
    while (digit_at(pos_)) {
      advance();
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (digit_at(pos_)) {
        advance();
        digits = true;
      }
    }
    if (!digits) throw ParseError(line, col, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '-' || src_[pos_] == '+')) advance();
      if (!digit_at(pos_)) throw ParseError(line, col, "malformed number exponent");
      while (digit_at(pos_)) advance();
    }
    if (pos_ < src_.size() &&
        (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      throw ParseError(line_, col_, "unexpected character '" + std::string(1, src_[pos_]) +
                                        "' after number (durations are plain seconds)");
    }
    return {Tok::number, std::string(src_.substr(start, pos_ - start)), line, col};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, SpinSystemPtr system) : lex_(text), system_(std::move(system)) {
    bump();
  }

  std::vector<SequenceStep> parse_all() {
    std::vector<SequenceStep> steps;
    while (cur_.kind != Tok::end) {
      if (cur_.kind == Tok::rbrace) fail(cur_, "unmatched '}'");
      steps.push_back(statement(0));
    }
    return steps;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.column, msg);
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::end ? std::string("end of input") : "'" + t.text + "'";
  }

  void bump() { cur_ = lex_.next(); }

  void expect_semi(const char* after) {
    if (cur_.kind != Tok::semi) fail(cur_, std::string("expected ';' after ") + after + ", found " + describe(cur_));
    bump();
  }

  std::string spin_name() {
    if (cur_.kind != Tok::ident) fail(cur_, "expected spin name, found " + describe(cur_));
    if (!system_->contains(cur_.text)) fail(cur_, "unknown spin '" + cur_.text + "'");
    std::string name = cur_.text;
    bump();
    return name;
  }

  SequenceStep statement(int depth) {
    if (cur_.kind != Tok::ident) fail(cur_, "expected statement, found " + describe(cur_));
    const Token kw = cur_;
    bump();
    if (kw.text == "wait") return wait_stmt();
    if (kw.text == "pe") return pe_stmt();
    if (kw.text == "comp") return comp_stmt();
    if (kw.text == "measure") return measure_stmt();
    if (kw.text == "repeat") return repeat_stmt(kw, depth);
    fail(kw, "unknown statement '" + kw.text + "'");
  }

  SequenceStep wait_stmt() {
    if (cur_.kind != Tok::number) fail(cur_, "expected duration in seconds, found " + describe(cur_));
    const Token num = cur_;
    double value = 0.0;
    const char* first = num.text.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, num.text.data() + num.text.size(), value);
    if (ec != std::errc() || ptr != num.text.data() + num.text.size() || !std::isfinite(value)) {
      fail(num, "invalid duration '" + num.text + "'");
    }
    if (value < 0.0) fail(num, "negative duration " + num.text);
    bump();
    expect_semi("wait");
    return {Wait{value}};
  }

  SequenceStep pe_stmt() {
    auto a = spin_name();
    const Token second = cur_;
    auto b = spin_name();
    if (a == b) fail(second, "pe needs two distinct spins");
    expect_semi("pe");
    return {ApplyGate{pe(system_, a, b), GateRole::pe}};
  }

  SequenceStep comp_stmt() {
    auto t = spin_name();
    const Token second = cur_;
    auto a = spin_name();
    const Token third = cur_;
    auto b = spin_name();
    if (a == t) fail(second, "comp needs three distinct spins");
    if (b == t || b == a) fail(third, "comp needs three distinct spins");
    expect_semi("comp");
    return {ApplyGate{comp(system_, t, a, b), GateRole::comp}};
  }

  SequenceStep measure_stmt() {
    Measure m;
    if (cur_.kind != Tok::ident) fail(cur_, "measure needs at least one spin");
    while (cur_.kind == Tok::ident) m.spins.push_back(spin_name());
    expect_semi("measure");
    return {std::move(m)};
  }

  SequenceStep repeat_stmt(const Token& kw, int depth) {
    if (depth + 1 > PulseSequence::kMaxDepth) {
      fail(kw, "repeat nesting deeper than " + std::to_string(PulseSequence::kMaxDepth));
    }
    if (cur_.kind != Tok::number) fail(cur_, "expected repeat count, found " + describe(cur_));
    const Token num = cur_;
    for (char c : num.text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        fail(num, "repeat count must be a positive integer, got '" + num.text + "'");
      }
    }
    long long count = 0;
    auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), count);
    if (ec != std::errc() || count > 1'000'000'000LL) fail(num, "repeat count too large");
    (void)ptr;
    if (count < 1) fail(num, "repeat count must be at least 1");
    bump();
    if (cur_.kind != Tok::lbrace) fail(cur_, "expected '{' after repeat count, found " + describe(cur_));
    bump();
    Repeat r;
    r.count = static_cast<int>(count);
    while (cur_.kind != Tok::rbrace) {
      if (cur_.kind == Tok::end) fail(cur_, "expected '}' to close repeat opened at line " + std::to_string(kw.line));
      r.body.push_back(statement(depth + 1));
    }
    bump();
    return {std::move(r)};
  }

  Lexer lex_;
  SpinSystemPtr system_;
  Token cur_{Tok::end, "", 1, 1};
};

std::string format_number(double v) {
  // shortest text that round-trips
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void format_steps(const std::vector<SequenceStep>& steps, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& step : steps) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Wait>) {
            os << pad << "wait " << format_number(node.seconds) << ";\n";
          } else if constexpr (std::is_same_v<T, ApplyGate>) {
            const auto& spins = node.gate.involved_spins();
            os << pad << (spins.size() == 2 ? "pe" : "comp");
            for (const auto& s : spins) os << ' ' << s;
            os << ";\n";
          } else if constexpr (std::is_same_v<T, Measure>) {
            os << pad << "measure";
            for (const auto& s : node.spins) os << ' ' << s;
            os << ";\n";
          } else {
            os << pad << "repeat " << node.count << " {\n";
            format_steps(node.body, indent + 1, os);
            os << pad << "}\n";
          }
        },
        step.node);
  }
}

}  // namespace

PulseSequence parse_sequence(std::string_view text, SpinSystemPtr system) {
  if (!system) throw ParameterError("parse_sequence requires a spin system");
  Parser parser(text, system);
  PulseSequence seq;
  seq.steps = parser.parse_all();
  seq.system = std::move(system);
  return seq;
}

std::string format_sequence(const PulseSequence& sequence) {
  std::ostringstream os;
  format_steps(sequence.steps, 0, os);
  return os.str();
}

bool operator==(const SequenceStep& a, const SequenceStep& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Wait>) {
          return x.seconds == y.seconds;
        } else if constexpr (std::is_same_v<T, ApplyGate>) {
          return x.role == y.role && x.gate == y.gate;
        } else if constexpr (std::is_same_v<T, Measure>) {
          return x.spins == y.spins;
        } else {
          return x.count == y.count && x.body == y.body;
        }
      },
      a.node);
}

}  // namespace algcool
