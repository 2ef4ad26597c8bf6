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

#include "wignersim/engine.hpp"

#include <cmath>

namespace wignersim {

const char* model_name(Model model) {
  return model == Model::Unitary ? "unitary" : "collapse";
}

std::optional<Model> model_from_name(std::string_view name) {
  if (name == "unitary") return Model::Unitary;
  if (name == "collapse") return Model::Collapse;
  return std::nullopt;
}

namespace {

void assert_norm(const StateVector& state, int step_index) {
  double drift = std::abs(norm_sq(state) - 1.0);
  if (drift > kNormTol) {
    throw SimError(ErrorCode::EngineAssert,
                   "norm drift " + std::to_string(drift) + " after step " +
                       std::to_string(step_index));
  }
}

bool needs_rng(const ValidatedProtocol& protocol, const DynamicsModel& model) {
  return model.variant == Model::Collapse || protocol.measure_index.has_value();
}

}  // namespace

StateVector initial_state(const ValidatedProtocol& protocol) {
  return basis_state(protocol.protocol.layout, protocol.protocol.init);
}

StateVector return_reference_state(const ValidatedProtocol& protocol) {
  return basis_state(protocol.protocol.layout, protocol.return_reference);
}

RunResult run(const ValidatedProtocol& protocol, const DynamicsModel& model, RngStream* rng) {
  if (needs_rng(protocol, model) && rng == nullptr) {
    throw SimError(ErrorCode::MissingRngStream,
                   "an rng stream is required for collapse dynamics or a measuring protocol");
  }

  RunResult result;
  StateVector state = initial_state(protocol);
  std::optional<StateVector> pre_measure;

  const auto& steps = protocol.protocol.steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    const Step& step = steps[i];

    if (protocol.lowered[i]) {
      apply_local_in_place(state, *protocol.lowered[i]);
      assert_norm(state, index);
    } else if (std::holds_alternative<ReverseStep>(step)) {
      for (const LocalOperator& op : protocol.reverse_lowered[i]) {
        apply_local_in_place(state, op);
      }
      assert_norm(state, index);
    } else if (const auto* site = std::get_if<CollapseSiteStep>(&step)) {
      if (model.variant == Model::Collapse && model.fires(index)) {
        MeasurementOutcome outcome = measure_in_place(state, site->registers, rng->uniform());
        result.log.events.push_back(
            {index, Event::Kind::Collapse, outcome.values, outcome.probability});
      }
    } else if (const auto* check = std::get_if<CheckFactorizedStep>(&step)) {
      std::vector<std::string> part{check->target};
      double purity = reduced_purity(state, part);
      if (purity < 1.0 - check->tol) {
        throw SimError(ErrorCode::FactorizationAssertFailed,
                       "step " + std::to_string(index) + ": register '" + check->target +
                           "' has reduced purity " + std::to_string(purity) +
                           ", expected >= 1 - " + std::to_string(check->tol));
      }
    } else if (std::holds_alternative<MeasureStep>(step)) {
      pre_measure = state;
      MeasurementOutcome outcome =
          measure_in_place(state, protocol.measured_registers, rng->uniform());
      result.log.events.push_back(
          {index, Event::Kind::Readout, outcome.values, outcome.probability});
      result.readout = std::move(outcome);
    } else if (const auto* expect = std::get_if<ExpectStep>(&step)) {
      const StateVector& reference = pre_measure ? *pre_measure : state;
      result.expect_probs.push_back(marginal_probability(reference, expect->assignment));
    }
  }

  result.log.return_fidelity = fidelity(state, return_reference_state(protocol));
  result.log.returned = result.log.return_fidelity >= 1.0 - kReturnTol;
  result.pre_measure_state = pre_measure ? std::move(*pre_measure) : state;
  result.final_state = std::move(state);
  return result;
}

std::vector<StateVector> run_state_trace(const ValidatedProtocol& protocol) {
  const std::int64_t total = protocol.protocol.layout.total_dim();
  if (total > kMaxTraceDim) {
    throw SimError(ErrorCode::SystemTooLargeForTrace,
                   "state traces are capped at joint dim " + std::to_string(kMaxTraceDim) +
                       ", layout has " + std::to_string(total));
  }

  std::vector<StateVector> snapshots;
  snapshots.reserve(protocol.protocol.steps.size() + 1);
  StateVector state = initial_state(protocol);
  snapshots.push_back(state);

  const auto& steps = protocol.protocol.steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    if (protocol.lowered[i]) {
      apply_local_in_place(state, *protocol.lowered[i]);
      assert_norm(state, index);
    } else if (std::holds_alternative<ReverseStep>(steps[i])) {
      for (const LocalOperator& op : protocol.reverse_lowered[i]) {
        apply_local_in_place(state, op);
      }
      assert_norm(state, index);
    } else if (const auto* check = std::get_if<CheckFactorizedStep>(&steps[i])) {
      std::vector<std::string> part{check->target};
      double purity = reduced_purity(state, part);
      if (purity < 1.0 - check->tol) {
        throw SimError(ErrorCode::FactorizationAssertFailed,
                       "step " + std::to_string(index) + ": register '" + check->target +
                           "' has reduced purity " + std::to_string(purity));
      }
    }
    // collapse sites, measure and expect leave the traced state unchanged
    snapshots.push_back(state);
  }
  return snapshots;
}

}  // namespace wignersim
