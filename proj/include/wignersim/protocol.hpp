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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wignersim/statevec.hpp"

namespace wignersim {

// The step vocabulary. Matrix-bearing steps lower to a LocalOperator;
// collapse-site and check-factorized are markers with no matrix; reverse,
// measure and expect are control steps.

/// 2-level rotation of the target's 0/1 subspace, identity elsewhere:
/// |0> -> cos(theta)|0> + e^{i phi} sin(theta)|1>,
/// |1> -> -e^{-i phi} sin(theta)|0> + cos(theta)|1>.
struct SuperposeStep {
  std::string target;
  double theta = 0.0;
  double phi = 0.0;
  bool operator==(const SuperposeStep&) const = default;
};

/// If control is in level 1, increment the target level mod its dim.
struct CoupleStep {
  std::string control;
  std::string target;
  bool operator==(const CoupleStep&) const = default;
};

/// For source level s, permute the destination levels by perms[s].
struct CopyIntoStep {
  std::string src;
  std::string dst;
  std::vector<std::vector<int>> perms;
  bool operator==(const CopyIntoStep&) const = default;
};

/// Unconditional swap of destination levels 0 and 1.
struct RecordDefiniteStep {
  std::string dst;
  bool operator==(const RecordDefiniteStep&) const = default;
};

/// Branch-dependent write: src=0 swaps dst levels 0<->2, src=1 swaps 0<->3.
/// src must be 2-level and dst at least 4-level.
struct RecordWhichStep {
  std::string src;
  std::string dst;
  bool operator==(const RecordWhichStep&) const = default;
};

/// Inline dense unitary on the listed targets, first target most
/// significant; capped at 16x16.
struct UnitaryGateStep {
  std::vector<std::string> targets;
  CMatrix matrix;
  bool operator==(const UnitaryGateStep& other) const;
};

/// Dynamics-model marker: the collapse interpreter measures these registers
/// here, the unitary interpreter does nothing.
struct CollapseSiteStep {
  std::vector<std::string> registers;
  bool operator==(const CollapseSiteStep&) const = default;
};

/// Assertion that the register's reduced state has purity >= 1 - tol.
struct CheckFactorizedStep {
  std::string target;
  double tol = 0.0;
  bool operator==(const CheckFactorizedStep&) const = default;
};

/// Replays steps from..to (1-based, inclusive, strictly earlier) as their
/// inverses in reverse order; markers inside the range are dropped.
struct ReverseStep {
  int from = 0;
  int to = 0;
  bool operator==(const ReverseStep&) const = default;
};

/// Projective readout of the listed registers ("all" = every register in
/// layout order). At most one, and only expect steps may follow it.
struct MeasureStep {
  bool all = false;
  std::vector<std::string> registers;
  bool operator==(const MeasureStep&) const = default;
};

/// Declared outcome statistic: the probability that the assigned registers
/// read the assigned values is `prob` within `tol`.
struct ExpectStep {
  std::map<std::string, int> assignment;
  double prob = 0.0;
  double tol = 0.0;
  bool operator==(const ExpectStep&) const = default;
};

using Step = std::variant<SuperposeStep, CoupleStep, CopyIntoStep, RecordDefiniteStep,
                          RecordWhichStep, UnitaryGateStep, CollapseSiteStep, CheckFactorizedStep,
                          ReverseStep, MeasureStep, ExpectStep>;

const char* step_kind_name(const Step& step);
bool is_matrix_bearing(const Step& step);
bool is_marker(const Step& step);

/// The experiment IR: a layout, a full initial basis assignment, and the
/// ordered step list. step_spans is parallel to steps when the protocol was
/// parsed from text and empty otherwise; it never participates in equality.
struct Protocol {
  std::string name;
  RegisterLayout layout;
  std::map<std::string, int> init;
  std::vector<Step> steps;
  std::vector<SourceSpan> step_spans;

  bool operator==(const Protocol& other) const {
    return name == other.name && layout == other.layout && init == other.init &&
           steps == other.steps;
  }
};

/// A protocol that passed validation, with every matrix-bearing step lowered,
/// every reverse range compiled to explicit inverse steps, and the return
/// reference resolved (init overlaid by prob=1 expect assignments).
struct ValidatedProtocol {
  Protocol protocol;
  std::int64_t max_dim = kDefaultMaxDim;
  std::vector<std::optional<LocalOperator>> lowered;
  std::vector<std::vector<Step>> reverse_steps;
  std::vector<std::vector<LocalOperator>> reverse_lowered;
  std::optional<std::size_t> measure_index;
  std::vector<std::string> measured_registers;
  std::vector<std::size_t> expect_indices;
  std::map<std::string, int> return_reference;

  int step_count() const { return static_cast<int>(protocol.steps.size()); }
};

/// Lowers a matrix-bearing step to its LocalOperator. Throws NotInvertible
/// for non-matrix-bearing kinds.
LocalOperator lower_step(const Step& step, const RegisterLayout& layout);

/// Inverse of a step as a list of steps. Markers invert to the empty list;
/// reverse/measure/expect are not invertible. A couple on a target of dim
/// > 2 inverts to the copy-into step that conditionally decrements.
std::vector<Step> invert_step(const Step& step, const RegisterLayout& layout);

/// Concatenation of invert_step over steps from..to (1-based inclusive) in
/// reverse order, markers dropped. from > to yields the empty list.
std::vector<Step> compile_reverse(const Protocol& protocol, int from, int to);

/// Checks every protocol invariant and resolves reverse ranges. Throws
/// ValidationError carrying one positionally-reported issue per violation.
ValidatedProtocol validate(Protocol protocol, std::int64_t max_dim = kDefaultMaxDim);

/// Built-in protocols: "deutsch-wigner", "which-outcome", "photon-mirror",
/// and "chain-N" for N >= 2.
Protocol builtin(std::string_view name);

/// Copy of the protocol with every reverse step spliced out and replaced by
/// its compiled inverse steps.
Protocol expand_reverses(const Protocol& protocol);

}  // namespace wignersim
