// Copyright 2026 The wignersim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wignersim/protofile.hpp"

#include <charconv>
#include <cmath>
#include <set>

namespace wignersim {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool is_ident_cont(char c) { return is_ident_start(c) || is_digit(c) || c == '-'; }
bool is_inline_ws(char c) { return c == ' ' || c == '\t' || c == '\r'; }

class Parser {
 public:
  explicit Parser(std::string_view text) : src_(text) {}

  Protocol parse_file() {
    Protocol protocol;

    skip_blank_lines();
    expect_keyword("protocol");
    protocol.name = read_ident("protocol name");
    end_line();

    skip_blank_lines();
    expect_keyword("registers");
    end_line();
    protocol.layout = parse_registers();

    skip_blank_lines();
    SourceSpan init_span = here();
    expect_keyword("init");
    protocol.init = parse_init(protocol.layout, init_span);
    end_line();

    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      skip_inline_ws();
      SourceSpan span = here();
      protocol.steps.push_back(parse_step(protocol.layout, span));
      protocol.step_spans.push_back(span);
      end_line();
    }
    return protocol;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  SourceSpan here() const { return {line_, col_, pos_}; }

  void bump() {
    if (at_end()) return;
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_inline_ws() {
    while (!at_end() && is_inline_ws(peek())) bump();
  }

  bool at_line_break() const { return at_end() || peek() == '\n' || peek() == '#'; }

  // Consumes trailing whitespace, an optional comment and the newline.
  void end_line() {
    skip_inline_ws();
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') bump();
    }
    if (at_end()) return;
    if (peek() != '\n') {
      throw ParseError(ErrorCode::Syntax, here(), "expected end of line");
    }
    bump();
  }

  // Consumes lines that hold only whitespace or a comment.
  void skip_blank_lines() {
    while (!at_end()) {
      std::size_t save_pos = pos_;
      int save_line = line_, save_col = col_;
      skip_inline_ws();
      if (peek() == '#') {
        while (!at_end() && peek() != '\n') bump();
      }
      if (at_end()) return;
      if (peek() == '\n') {
        bump();
        continue;
      }
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
      return;
    }
  }

  std::string read_ident(const char* what) {
    skip_inline_ws();
    SourceSpan span = here();
    if (at_end() || !is_ident_start(peek())) {
      throw ParseError(ErrorCode::Syntax, span, std::string("expected ") + what);
    }
    std::size_t start = pos_;
    while (!at_end() && is_ident_cont(peek())) bump();
    return std::string(src_.substr(start, pos_ - start));
  }

  std::int64_t read_int(const char* what) {
    skip_inline_ws();
    SourceSpan span = here();
    if (at_end() || !is_digit(peek())) {
      throw ParseError(ErrorCode::Syntax, span, std::string("expected ") + what);
    }
    std::size_t start = pos_;
    while (!at_end() && is_digit(peek())) bump();
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec == std::errc::result_out_of_range) {
      throw ParseError(ErrorCode::NumericOverflow, span, "integer out of range");
    }
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      throw ParseError(ErrorCode::Syntax, span, std::string("expected ") + what);
    }
    return value;
  }

  double read_float(const char* what) {
    skip_inline_ws();
    SourceSpan span = here();
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') bump();
    bool digits = false;
    while (is_digit(peek())) {
      bump();
      digits = true;
    }
    if (peek() == '.') {
      bump();
      while (is_digit(peek())) {
        bump();
        digits = true;
      }
    }
    if (!digits) {
      throw ParseError(ErrorCode::Syntax, span, std::string("expected ") + what);
    }
    if (peek() == 'e' || peek() == 'E') {
      bump();
      if (peek() == '+' || peek() == '-') bump();
      if (!is_digit(peek())) {
        throw ParseError(ErrorCode::Syntax, here(), "malformed exponent");
      }
      while (is_digit(peek())) bump();
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec == std::errc::result_out_of_range) {
      throw ParseError(ErrorCode::NumericOverflow, span, "number out of range");
    }
    if (ec != std::errc{} || ptr != src_.data() + pos_) {
      throw ParseError(ErrorCode::Syntax, span, std::string("expected ") + what);
    }
    return value;
  }

  void expect_char(char c, const char* what) {
    skip_inline_ws();
    if (peek() != c) {
      throw ParseError(ErrorCode::Syntax, here(), std::string("expected '") + c + "' " + what);
    }
    bump();
  }

  void expect_keyword(const char* keyword) {
    skip_inline_ws();
    SourceSpan span = here();
    std::string word;
    if (!at_end() && is_ident_start(peek())) {
      std::size_t start = pos_;
      while (!at_end() && is_ident_cont(peek())) bump();
      word = std::string(src_.substr(start, pos_ - start));
    }
    if (word != keyword) {
      throw ParseError(ErrorCode::Syntax, span,
                       std::string("expected '") + keyword + "'" +
                           (word.empty() ? "" : ", got '" + word + "'"));
    }
  }

  double read_keyed_float(const char* key) {
    skip_inline_ws();
    SourceSpan span = here();
    const std::string expectation = std::string("'") + key + "='";
    if (at_line_break() || !is_ident_start(peek())) {
      throw ParseError(ErrorCode::Syntax, span, "expected " + expectation);
    }
    std::string word = read_ident("a keyword");
    if (word != key) {
      throw ParseError(ErrorCode::Syntax, span,
                       "expected " + expectation + ", got '" + word + "'");
    }
    skip_inline_ws();
    if (peek() != '=') {
      throw ParseError(ErrorCode::Syntax, here(), "expected " + expectation);
    }
    bump();
    return read_float("a number");
  }

  std::string read_register_ref(const RegisterLayout& layout, const char* what) {
    skip_inline_ws();
    SourceSpan span = here();
    std::string name = read_ident(what);
    if (!layout.find(name)) {
      throw ParseError(ErrorCode::UnknownRegister, span, "unknown register '" + name + "'");
    }
    return name;
  }

  RegisterLayout parse_registers() {
    std::vector<RegisterLayout::Register> regs;
    std::set<std::string> seen;
    while (true) {
      skip_blank_lines();
      if (at_end() || !is_inline_ws(peek())) break;
      skip_inline_ws();
      SourceSpan name_span = here();
      std::string name = read_ident("a register name");
      if (name == "all" || name == "prob" || name == "tol") {
        throw ParseError(ErrorCode::InvalidName, name_span,
                         "register name '" + name + "' is a reserved word");
      }
      if (!seen.insert(name).second) {
        throw ParseError(ErrorCode::DuplicateRegister, name_span,
                         "duplicate register '" + name + "'");
      }
      skip_inline_ws();
      SourceSpan dim_span = here();
      std::int64_t dim = read_int("a register dimension");
      if (dim < kMinRegisterDim || dim > kMaxRegisterDim) {
        throw ParseError(ErrorCode::ValueOutOfRange, dim_span,
                         "register dimension must be in " + std::to_string(kMinRegisterDim) +
                             ".." + std::to_string(kMaxRegisterDim));
      }
      regs.push_back({std::move(name), static_cast<int>(dim)});
      end_line();
    }
    if (regs.empty()) {
      throw ParseError(ErrorCode::Syntax, here(),
                       "expected at least one indented register line");
    }
    return RegisterLayout::make(std::move(regs));
  }

  std::map<std::string, int> parse_init(const RegisterLayout& layout, SourceSpan init_span) {
    std::map<std::string, int> init;
    while (true) {
      skip_inline_ws();
      if (at_line_break()) break;
      SourceSpan span = here();
      std::string name = read_ident("a register name");
      if (!layout.find(name)) {
        throw ParseError(ErrorCode::UnknownRegister, span, "unknown register '" + name + "'");
      }
      if (init.count(name)) {
        throw ParseError(ErrorCode::DuplicateRegister, span,
                         "register '" + name + "' assigned twice");
      }
      expect_char('=', "after register name");
      skip_inline_ws();
      SourceSpan value_span = here();
      std::int64_t value = read_int("a basis value");
      int reg = layout.require(name);
      if (value < 0 || value >= layout.dim(reg)) {
        throw ParseError(ErrorCode::ValueOutOfRange, value_span,
                         "value " + std::to_string(value) + " out of range for register '" +
                             name + "' of dim " + std::to_string(layout.dim(reg)));
      }
      init[name] = static_cast<int>(value);
    }
    for (const auto& reg : layout.registers()) {
      if (!init.count(reg.name)) {
        throw ParseError(ErrorCode::MissingRegister, init_span,
                         "init misses register '" + reg.name + "'");
      }
    }
    return init;
  }

  Complex read_complex() {
    double re = read_float("a complex entry");
    skip_inline_ws();
    if (peek() != '+' && peek() != '-') {
      throw ParseError(ErrorCode::Syntax, here(), "expected '+' or '-' before imaginary part");
    }
    const double sign = peek() == '-' ? -1.0 : 1.0;
    bump();
    double im = read_float("the imaginary magnitude");
    if (peek() != 'i') {
      throw ParseError(ErrorCode::Syntax, here(), "expected 'i' after imaginary part");
    }
    bump();
    return Complex{re, sign * im};
  }

  CMatrix read_matrix() {
    skip_inline_ws();
    SourceSpan open_span = here();
    expect_char('[', "to open the matrix");
    std::vector<std::vector<Complex>> rows(1);
    while (true) {
      rows.back().push_back(read_complex());
      skip_inline_ws();
      if (peek() == ',') {
        bump();
        continue;
      }
      if (peek() == ';') {
        bump();
        rows.emplace_back();
        continue;
      }
      if (peek() == ']') {
        bump();
        break;
      }
      throw ParseError(ErrorCode::Syntax, here(), "expected ',', ';' or ']' in matrix");
    }
    const std::size_t n = rows.size();
    if (n > static_cast<std::size_t>(kMaxInlineMatrixDim)) {
      throw ParseError(ErrorCode::DimensionMismatch, open_span,
                       "matrix exceeds the 16x16 cap");
    }
    for (const auto& row : rows) {
      if (row.size() != n) {
        throw ParseError(ErrorCode::DimensionMismatch, open_span,
                         "matrix rows must all have length " + std::to_string(n));
      }
    }
    CMatrix matrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
    return matrix;
  }

  std::vector<std::vector<int>> read_perms() {
    skip_inline_ws();
    SourceSpan span = here();
    std::string word = read_ident("'perms='");
    if (word != "perms") {
      throw ParseError(ErrorCode::Syntax, span, "expected 'perms=', got '" + word + "'");
    }
    expect_char('=', "after 'perms'");
    expect_char('[', "to open the permutation list");
    std::vector<std::vector<int>> perms(1);
    while (true) {
      perms.back().push_back(static_cast<int>(read_int("a level")));
      skip_inline_ws();
      if (peek() == ',') {
        bump();
        continue;
      }
      if (peek() == ';') {
        bump();
        perms.emplace_back();
        continue;
      }
      if (peek() == ']') {
        bump();
        break;
      }
      throw ParseError(ErrorCode::Syntax, here(), "expected ',', ';' or ']' in perms");
    }
    return perms;
  }

  Step parse_step(const RegisterLayout& layout, SourceSpan span) {
    std::string word = read_ident("a step keyword");
    if (word == "step") {
      skip_inline_ws();
      SourceSpan kind_span = here();
      std::string kind = read_ident("a step kind");
      if (kind == "superpose") {
        std::string target = read_register_ref(layout, "a register name");
        double theta = read_keyed_float("theta");
        double phi = read_keyed_float("phi");
        return SuperposeStep{std::move(target), theta, phi};
      }
      if (kind == "couple") {
        std::string control = read_register_ref(layout, "the control register");
        std::string target = read_register_ref(layout, "the target register");
        return CoupleStep{std::move(control), std::move(target)};
      }
      if (kind == "copy-into") {
        std::string src = read_register_ref(layout, "the source register");
        std::string dst = read_register_ref(layout, "the destination register");
        return CopyIntoStep{std::move(src), std::move(dst), read_perms()};
      }
      if (kind == "record-definite") {
        return RecordDefiniteStep{read_register_ref(layout, "the destination register")};
      }
      if (kind == "record-which") {
        std::string src = read_register_ref(layout, "the source register");
        std::string dst = read_register_ref(layout, "the destination register");
        return RecordWhichStep{std::move(src), std::move(dst)};
      }
      if (kind == "unitary") {
        std::vector<std::string> targets;
        while (true) {
          skip_inline_ws();
          if (peek() == '[') break;
          if (at_line_break()) {
            throw ParseError(ErrorCode::Syntax, here(), "expected a matrix literal");
          }
          targets.push_back(read_register_ref(layout, "a target register"));
        }
        if (targets.empty()) {
          throw ParseError(ErrorCode::Syntax, here(), "unitary needs at least one target");
        }
        return UnitaryGateStep{std::move(targets), read_matrix()};
      }
      throw ParseError(ErrorCode::Syntax, kind_span, "unknown step kind '" + kind + "'");
    }
    if (word == "reverse") {
      int from = static_cast<int>(read_int("the range start"));
      skip_inline_ws();
      if (peek() != '.' || peek(1) != '.') {
        throw ParseError(ErrorCode::Syntax, here(), "expected '..' in the reverse range");
      }
      bump();
      bump();
      int to = static_cast<int>(read_int("the range end"));
      return ReverseStep{from, to};
    }
    if (word == "collapse-site") {
      std::vector<std::string> registers;
      while (true) {
        skip_inline_ws();
        if (at_line_break()) break;
        registers.push_back(read_register_ref(layout, "a register name"));
      }
      if (registers.empty()) {
        throw ParseError(ErrorCode::Syntax, here(), "collapse-site needs at least one register");
      }
      return CollapseSiteStep{std::move(registers)};
    }
    if (word == "check-factorized") {
      std::string target = read_register_ref(layout, "a register name");
      double tol = read_keyed_float("tol");
      return CheckFactorizedStep{std::move(target), tol};
    }
    if (word == "measure") {
      skip_inline_ws();
      SourceSpan name_span = here();
      std::string first = read_ident("'all' or a register name");
      if (first == "all") {
        return MeasureStep{true, {}};
      }
      if (!layout.find(first)) {
        throw ParseError(ErrorCode::UnknownRegister, name_span,
                         "unknown register '" + first + "'");
      }
      std::vector<std::string> registers{std::move(first)};
      while (true) {
        skip_inline_ws();
        if (at_line_break()) break;
        registers.push_back(read_register_ref(layout, "a register name"));
      }
      return MeasureStep{false, std::move(registers)};
    }
    if (word == "expect") {
      ExpectStep step;
      bool saw_prob = false;
      while (true) {
        skip_inline_ws();
        SourceSpan name_span = here();
        std::string name = read_ident("a register name or 'prob='");
        if (name == "prob") {
          expect_char('=', "after 'prob'");
          step.prob = read_float("a probability");
          saw_prob = true;
          break;
        }
        if (name == "tol") {
          throw ParseError(ErrorCode::Syntax, name_span, "expected 'prob=' before 'tol='");
        }
        if (!layout.find(name)) {
          throw ParseError(ErrorCode::UnknownRegister, name_span,
                           "unknown register '" + name + "'");
        }
        if (step.assignment.count(name)) {
          throw ParseError(ErrorCode::DuplicateRegister, name_span,
                           "register '" + name + "' assigned twice");
        }
        expect_char('=', "after register name");
        skip_inline_ws();
        SourceSpan value_span = here();
        std::int64_t value = read_int("a basis value");
        int reg = layout.require(name);
        if (value < 0 || value >= layout.dim(reg)) {
          throw ParseError(ErrorCode::ValueOutOfRange, value_span,
                           "value " + std::to_string(value) + " out of range for register '" +
                               name + "'");
        }
        step.assignment[name] = static_cast<int>(value);
        if (at_line_break()) {
          throw ParseError(ErrorCode::Syntax, here(), "expected 'prob=' before end of line");
        }
      }
      if (!saw_prob || step.assignment.empty()) {
        throw ParseError(ErrorCode::Syntax, span,
                         "expect needs at least one assignment and prob=");
      }
      double tol = read_keyed_float("tol");
      step.tol = tol;
      return step;
    }
    throw ParseError(ErrorCode::Syntax, span,
                     "expected 'step', 'reverse', 'collapse-site', 'check-factorized', "
                     "'measure' or 'expect', got '" +
                         word + "'");
  }
};

void append_complex(std::string& out, const Complex& value) {
  out += format_double(value.real());
  if (std::signbit(value.imag())) {
    out += '-';
    out += format_double(-value.imag());
  } else {
    out += '+';
    out += format_double(value.imag());
  }
  out += 'i';
}

}  // namespace

Protocol parse(std::string_view text) { return Parser(text).parse_file(); }

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, static_cast<std::size_t>(ptr - buf));
}

std::string serialize(const Protocol& protocol) {
  std::string out;
  out += "protocol ";
  out += protocol.name;
  out += "\nregisters\n";
  for (const auto& reg : protocol.layout.registers()) {
    out += "  ";
    out += reg.name;
    out += ' ';
    out += std::to_string(reg.dim);
    out += '\n';
  }
  out += "init";
  for (const auto& reg : protocol.layout.registers()) {
    auto it = protocol.init.find(reg.name);
    if (it == protocol.init.end()) {
      throw SimError(ErrorCode::MissingRegister,
                     "init misses register '" + reg.name + "'");
    }
    out += ' ';
    out += reg.name;
    out += '=';
    out += std::to_string(it->second);
  }
  out += '\n';

  for (const Step& step : protocol.steps) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SuperposeStep>) {
            out += "step superpose " + s.target + " theta=" + format_double(s.theta) +
                   " phi=" + format_double(s.phi);
          } else if constexpr (std::is_same_v<T, CoupleStep>) {
            out += "step couple " + s.control + " " + s.target;
          } else if constexpr (std::is_same_v<T, CopyIntoStep>) {
            out += "step copy-into " + s.src + " " + s.dst + " perms=[";
            for (std::size_t a = 0; a < s.perms.size(); ++a) {
              if (a) out += ';';
              for (std::size_t b = 0; b < s.perms[a].size(); ++b) {
                if (b) out += ',';
                out += std::to_string(s.perms[a][b]);
              }
            }
            out += ']';
          } else if constexpr (std::is_same_v<T, RecordDefiniteStep>) {
            out += "step record-definite " + s.dst;
          } else if constexpr (std::is_same_v<T, RecordWhichStep>) {
            out += "step record-which " + s.src + " " + s.dst;
          } else if constexpr (std::is_same_v<T, UnitaryGateStep>) {
            out += "step unitary";
            for (const auto& target : s.targets) out += ' ' + target;
            out += " [";
            for (Eigen::Index r = 0; r < s.matrix.rows(); ++r) {
              if (r) out += ';';
              for (Eigen::Index c = 0; c < s.matrix.cols(); ++c) {
                if (c) out += ',';
                append_complex(out, s.matrix(r, c));
              }
            }
            out += ']';
          } else if constexpr (std::is_same_v<T, CollapseSiteStep>) {
            out += "collapse-site";
            for (const auto& name : s.registers) out += ' ' + name;
          } else if constexpr (std::is_same_v<T, CheckFactorizedStep>) {
            out += "check-factorized " + s.target + " tol=" + format_double(s.tol);
          } else if constexpr (std::is_same_v<T, ReverseStep>) {
            out += "reverse " + std::to_string(s.from) + ".." + std::to_string(s.to);
          } else if constexpr (std::is_same_v<T, MeasureStep>) {
            out += "measure";
            if (s.all) {
              out += " all";
            } else {
              for (const auto& name : s.registers) out += ' ' + name;
            }
          } else if constexpr (std::is_same_v<T, ExpectStep>) {
            out += "expect";
            for (const auto& reg : protocol.layout.registers()) {
              auto it = s.assignment.find(reg.name);
              if (it != s.assignment.end()) {
                out += ' ' + reg.name + '=' + std::to_string(it->second);
              }
            }
            out += " prob=" + format_double(s.prob) + " tol=" + format_double(s.tol);
          }
        },
        step);
    out += '\n';
  }
  return out;
}

}  // namespace wignersim
