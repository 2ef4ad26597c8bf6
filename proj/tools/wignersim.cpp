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

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "wignersim/engine.hpp"
#include "wignersim/protofile.hpp"
#include "wignersim/report.hpp"
#include "wignersim/trials.hpp"

namespace {

using namespace wignersim;

// Exit codes: 0 ok, 1 parse/validation/usage error, 2 engine assertion,
// 3 an expectation was falsified by the run.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEngine = 2;
constexpr int kExitExpectation = 3;

std::int64_t effective_max_dim() {
  const char* env = std::getenv("WIGNERSIM_MAX_DIM");
  if (env == nullptr) return kDefaultMaxDim;
  std::string_view text(env);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
    return kDefaultMaxDim;
  }
  return std::min(value, kDefaultMaxDim);  // the override only lowers the cap
}

struct ProtocolSource {
  std::string file;
  std::string builtin_name;
  std::string label() const { return file.empty() ? builtin_name : file; }
};

Protocol load_protocol(const ProtocolSource& source) {
  if (!source.builtin_name.empty()) {
    return builtin(source.builtin_name);
  }
  std::ifstream in(source.file, std::ios::binary);
  if (!in) {
    throw SimError(ErrorCode::Io, "cannot open '" + source.file + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void print_issue(const std::string& label, const ValidationIssue& issue) {
  std::cerr << label;
  if (issue.span) {
    std::cerr << ":" << issue.span->line << ":" << issue.span->column;
  }
  std::cerr << ": error";
  if (issue.step_index > 0) {
    std::cerr << " (step " << issue.step_index << ")";
  }
  std::cerr << ": " << issue.message << "\n";
}

// Runs fn, mapping protocol and engine failures to the documented codes.
template <typename Fn>
int guard(const std::string& label, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    std::cerr << label << ":" << e.span().line << ":" << e.span().column
              << ": error: " << e.message() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    for (const auto& issue : e.issues()) print_issue(label, issue);
    return kExitUsage;
  } catch (const SimError& e) {
    switch (e.code()) {
      case ErrorCode::EngineAssert:
      case ErrorCode::FactorizationAssertFailed:
      case ErrorCode::DegenerateState:
        std::cerr << label << ": engine assertion: " << e.what() << "\n";
        return kExitEngine;
      default:
        std::cerr << label << ": error: " << e.what() << "\n";
        return kExitUsage;
    }
  }
}

void add_source_options(CLI::App* cmd, ProtocolSource& source) {
  auto* file = cmd->add_option("--protocol", source.file, "Protocol file (.wproto)");
  auto* name = cmd->add_option("--builtin", source.builtin_name,
                               "Builtin protocol: deutsch-wigner, which-outcome, "
                               "photon-mirror, chain-N");
  file->excludes(name);
  name->excludes(file);
}

void require_source(const ProtocolSource& source) {
  if (source.file.empty() == source.builtin_name.empty()) {
    throw SimError(ErrorCode::Io, "exactly one of --protocol or --builtin is required");
  }
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw SimError(ErrorCode::Io, "cannot write '" + out_path + "'");
  }
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for reversible-measurement experiments: runs protocols "
               "under global unitary dynamics or observation-triggered collapse "
               "and reports the statistics that tell the two apart."};
  app.require_subcommand(1);

  // run
  ProtocolSource run_source;
  std::string run_model;
  std::int64_t run_trials_n = 1000;
  std::uint64_t run_seed = 0;
  std::string run_format = "json";
  std::string run_out;
  auto* cmd_run = app.add_subcommand("run", "Run trials and write a report");
  add_source_options(cmd_run, run_source);
  cmd_run->add_option("--model", run_model, "Dynamics model")
      ->required()
      ->check(CLI::IsMember({"unitary", "collapse"}));
  cmd_run->add_option("--trials", run_trials_n, "Number of trials")->check(CLI::PositiveNumber);
  cmd_run->add_option("--seed", run_seed, "Master seed");
  cmd_run->add_option("--format", run_format, "Report format")
      ->check(CLI::IsMember({"json", "tsv"}));
  cmd_run->add_option("--out", run_out, "Write the report to this file instead of stdout");

  // validate / canon / invert
  ProtocolSource validate_source, canon_source, invert_source;
  auto* cmd_validate = app.add_subcommand("validate", "Check a protocol and print its step count");
  add_source_options(cmd_validate, validate_source);
  auto* cmd_canon = app.add_subcommand("canon", "Print the canonical form of a protocol");
  add_source_options(cmd_canon, canon_source);
  auto* cmd_invert =
      app.add_subcommand("invert", "Print the protocol with reverse ranges expanded "
                                   "into explicit inverse steps");
  add_source_options(cmd_invert, invert_source);

  // distinguish
  double bayes_threshold = 0.0;
  auto* cmd_distinguish = app.add_subcommand(
      "distinguish", "How many perfect returns favor unitarity by a given Bayes factor");
  cmd_distinguish->add_option("--bayes-factor", bayes_threshold, "Bayes factor threshold")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::int64_t max_dim = effective_max_dim();

  if (cmd_run->parsed()) {
    return guard(run_source.label(), [&]() -> int {
      require_source(run_source);
      ValidatedProtocol protocol = validate(load_protocol(run_source), max_dim);
      DynamicsModel model{*model_from_name(run_model), std::nullopt};
      const unsigned hw = std::thread::hardware_concurrency();
      const int threads = static_cast<int>(hw == 0 ? 1 : hw);
      TrialReport report = run_trials(protocol, model, run_trials_n, run_seed, threads);
      emit(run_format == "tsv" ? report_to_tsv(report) : report_to_json_string(report), run_out);
      return report.all_expectations_pass() ? kExitOk : kExitExpectation;
    });
  }
  if (cmd_validate->parsed()) {
    return guard(validate_source.label(), [&]() -> int {
      require_source(validate_source);
      ValidatedProtocol protocol = validate(load_protocol(validate_source), max_dim);
      std::cout << "ok " << protocol.step_count() << " steps\n";
      return kExitOk;
    });
  }
  if (cmd_canon->parsed()) {
    return guard(canon_source.label(), [&]() -> int {
      require_source(canon_source);
      ValidatedProtocol protocol = validate(load_protocol(canon_source), max_dim);
      std::cout << serialize(protocol.protocol);
      return kExitOk;
    });
  }
  if (cmd_invert->parsed()) {
    return guard(invert_source.label(), [&]() -> int {
      require_source(invert_source);
      ValidatedProtocol protocol = validate(load_protocol(invert_source), max_dim);
      Protocol expanded = expand_reverses(protocol.protocol);
      validate(expanded, max_dim);
      std::cout << serialize(expanded);
      return kExitOk;
    });
  }
  if (cmd_distinguish->parsed()) {
    return guard("distinguish", [&]() -> int {
      const int needed = trials_to_threshold(bayes_threshold);
      std::cout << "trials_to_threshold " << needed << "\n";
      std::cout << "n\tbayes_factor\n";
      for (int n = 1; n <= needed; ++n) {
        std::cout << n << "\t" << format_double(bayes_factor(n, n)) << "\n";
      }
      return kExitOk;
    });
  }
  return kExitUsage;
}
