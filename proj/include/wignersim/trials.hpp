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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wignersim/engine.hpp"

namespace wignersim {

/// Verdict on one expect step. `exact` verdicts were decided by amplitude
/// computation (unitary model, target prob 0 or 1, or no readout to sample);
/// empirical verdicts compare the observed frequency against the target
/// within tol plus a 3-sigma binomial slack.
struct ExpectVerdict {
  int step_index = 0;  // 1-based
  double target_prob = 0.0;
  double observed_prob = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool exact = false;
};

struct TrialReport {
  std::string protocol;
  Model model = Model::Unitary;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  /// Names of the measured registers; histogram tuples follow this order.
  std::vector<std::string> outcome_registers;
  /// (outcome tuple, count), ascending by tuple; counts sum to `trials`
  /// whenever the protocol measures.
  std::vector<std::pair<std::vector<int>, std::int64_t>> histogram;
  std::vector<ExpectVerdict> expectations;
  /// Fraction of trials whose final fidelity to the return reference
  /// cleared 1 - kReturnTol.
  double return_rate = 0.0;
  /// Likelihood ratio of the unitary vs collapse point hypotheses after the
  /// observed returns: 2^n when every trial returned, 0 otherwise.
  double bayes_factor = 0.0;
  double wall_ms = 0.0;

  bool all_expectations_pass() const;
};

/// Runs n independent trials with per-trial RngStreams and aggregates them
/// by trial index, so the report is identical for any thread count.
TrialReport run_trials(const ValidatedProtocol& protocol, const DynamicsModel& model,
                       std::int64_t n, std::uint64_t master_seed, int threads = 1);

/// L(unitary)/L(collapse) for k returns out of n trials. With p_unitary = 1
/// this is 2^n for k = n and 0 otherwise.
double bayes_factor(std::int64_t k, std::int64_t n, double p_unitary = 1.0,
                    double p_collapse = 0.5);

/// Smallest n with 2^n >= threshold, i.e. the number of perfect returns
/// needed before the unitary hypothesis is favored by that factor.
int trials_to_threshold(double bayes_threshold);

}  // namespace wignersim
