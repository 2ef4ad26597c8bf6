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

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wignersim/layout.hpp"
#include "wignersim/types.hpp"

namespace wignersim {

/// Normalized complex amplitudes over the joint basis of a layout.
/// Operations either return fresh states or mutate a state the caller
/// exclusively owns; there is no shared mutable engine state.
struct StateVector {
  RegisterLayout layout;
  CVector amps;
};

/// A dense operator on a subset of registers. The matrix acts on the
/// composite index of the targets in their listed order, first target most
/// significant. When `unitary` is set, application checks
/// max |(M^dagger M - I)_ij| <= kUnitaryTol.
struct LocalOperator {
  std::vector<std::string> targets;
  CMatrix matrix;
  bool unitary = true;
};

/// Result of a projective measurement: the sampled joint value of the
/// measured registers and its Born probability.
struct MeasurementOutcome {
  std::vector<std::string> registers;
  std::vector<int> values;
  double probability = 0.0;
  bool operator==(const MeasurementOutcome&) const = default;
};

/// Unit vector with amplitude 1 at the assigned basis tuple. The assignment
/// must cover every register exactly once.
StateVector basis_state(const RegisterLayout& layout, const std::map<std::string, int>& assignment);

/// Joint index of a full register assignment.
std::int64_t basis_index(const RegisterLayout& layout, const std::map<std::string, int>& assignment);

double norm_sq(const StateVector& state);

/// max |(M^dagger M - I)_ij|.
double unitarity_error(const CMatrix& matrix);

/// Applies a local operator: strided gather of each target block, m x m
/// multiply, scatter back, over every configuration of the other registers.
void apply_local_in_place(StateVector& state, const LocalOperator& op);
StateVector apply_local(StateVector state, const LocalOperator& op);

/// Explicit D x D embedding of a local operator, identity on non-targets.
/// Brute-force oracle for apply_local; capped at D <= kMaxOracleDim.
CMatrix dense_embed(const LocalOperator& op, const RegisterLayout& layout);

/// Born-rule projective measurement of the listed registers. The joint
/// outcome is chosen by inverse CDF over joint values in ascending
/// mixed-radix order (first listed register most significant) using the
/// uniform u in [0,1); the state is projected and renormalized.
MeasurementOutcome measure_in_place(StateVector& state, std::span<const std::string> registers,
                                    double u);
std::pair<MeasurementOutcome, StateVector> measure(StateVector state,
                                                   std::span<const std::string> registers,
                                                   double u);

/// Squared magnitude of the inner product.
double fidelity(const StateVector& a, const StateVector& b);

/// Purity Tr(rho_part^2) of the reduced state of `part`, a proper nonempty
/// subset of the registers. 1 exactly when `part` is unentangled from the
/// rest.
double reduced_purity(const StateVector& state, std::span<const std::string> part);

/// Probability that the listed registers hold the assigned values:
/// sum of |amp|^2 over all matching joint indices.
double marginal_probability(const StateVector& state, const std::map<std::string, int>& assignment);

}  // namespace wignersim
