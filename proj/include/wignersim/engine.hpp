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

#pragma once

#include <optional>
#include <set>

#include "wignersim/protocol.hpp"
#include "wignersim/rng.hpp"

namespace wignersim {

/// The two rival dynamics. Under Unitary, collapse sites are no-ops; under
/// Collapse, each firing site projectively measures its registers and the
/// run continues from the sampled branch.
enum class Model { Unitary, Collapse };

const char* model_name(Model model);
std::optional<Model> model_from_name(std::string_view name);

struct DynamicsModel {
  Model variant = Model::Unitary;
  /// 1-based step indices of the collapse sites that fire; nullopt = all.
  std::optional<std::set<int>> firing_sites;

  bool fires(int step_index) const {
    return !firing_sites || firing_sites->count(step_index) > 0;
  }
};

/// One sampled event in a run: a collapse at a site, or the final readout.
struct Event {
  enum class Kind { Collapse, Readout };
  int step_index = 0;  // 1-based
  Kind kind = Kind::Collapse;
  std::vector<int> values;
  double probability = 0.0;
  bool operator==(const Event&) const = default;
};

/// Per-trial record: the sampled events plus the return statistic, the
/// fidelity of the final state to the protocol's return reference (the init
/// basis state overlaid with prob=1 expect assignments).
struct EventLog {
  std::vector<Event> events;
  double return_fidelity = 0.0;
  bool returned = false;
  bool operator==(const EventLog&) const = default;
};

struct RunResult {
  StateVector final_state;
  /// State just before the final measurement; equals final_state when the
  /// protocol does not measure. Exact expectation probabilities are
  /// evaluated against this state.
  StateVector pre_measure_state;
  std::optional<MeasurementOutcome> readout;
  /// Exact marginal probability of each expect step's assignment, in expect
  /// order, computed on pre_measure_state.
  std::vector<double> expect_probs;
  EventLog log;
};

/// Executes the protocol under the chosen dynamics. One uniform is consumed
/// per firing collapse site and one for the final measurement, in step
/// order. rng may be null only when the model is unitary and the protocol
/// has no measure step.
RunResult run(const ValidatedProtocol& protocol, const DynamicsModel& model, RngStream* rng);

/// State snapshots of the unitary dynamics: snapshot 0 is the initial state
/// and snapshot k the state after step k. Measure and expect steps do not
/// sample and leave the state unchanged. Capped at D <= kMaxTraceDim.
std::vector<StateVector> run_state_trace(const ValidatedProtocol& protocol);

/// The protocol's initial basis state.
StateVector initial_state(const ValidatedProtocol& protocol);

/// The basis state the return statistic is measured against.
StateVector return_reference_state(const ValidatedProtocol& protocol);

}  // namespace wignersim
