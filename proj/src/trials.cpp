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

#include "wignersim/trials.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

namespace wignersim {

bool TrialReport::all_expectations_pass() const {
  return std::all_of(expectations.begin(), expectations.end(),
                     [](const ExpectVerdict& v) { return v.pass; });
}

namespace {

struct TrialData {
  std::vector<int> readout;
  bool has_readout = false;
  bool returned = false;
  std::vector<double> expect_probs;
};

TrialData run_one(const ValidatedProtocol& protocol, const DynamicsModel& model,
                  std::uint64_t master_seed, std::int64_t trial) {
  RngStream stream = RngStream::for_trial(master_seed, static_cast<std::uint64_t>(trial));
  RunResult result = run(protocol, model, &stream);
  TrialData data;
  if (result.readout) {
    data.readout = result.readout->values;
    data.has_readout = true;
  }
  data.returned = result.log.returned;
  data.expect_probs = std::move(result.expect_probs);
  return data;
}

}  // namespace

TrialReport run_trials(const ValidatedProtocol& protocol, const DynamicsModel& model,
                       std::int64_t n, std::uint64_t master_seed, int threads) {
  if (n < 1) {
    throw SimError(ErrorCode::ValueOutOfRange, "trial count must be at least 1");
  }
  const auto start = std::chrono::steady_clock::now();

  std::vector<TrialData> results(static_cast<std::size_t>(n));
  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      try {
        results[static_cast<std::size_t>(i)] = run_one(protocol, model, master_seed, i);
      } catch (const SimError& e) {
        throw SimError(e.code(), "trial " + std::to_string(i) + ": " + e.what());
      }
    }
  };

  if (threads <= 1 || n == 1) {
    run_range(0, n);
  } else {
    const int worker_count = static_cast<int>(std::min<std::int64_t>(threads, n));
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(worker_count));
    const std::int64_t chunk = (n + worker_count - 1) / worker_count;
    for (int w = 0; w < worker_count; ++w) {
      const std::int64_t lo = w * chunk;
      const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
      workers.emplace_back([&, w, lo, hi] {
        try {
          run_range(lo, hi);
        } catch (...) {
          failures[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  // Aggregation walks trials in index order; the result is independent of
  // which thread produced which trial.
  TrialReport report;
  report.protocol = protocol.protocol.name;
  report.model = model.variant;
  report.trials = n;
  report.seed = master_seed;
  report.outcome_registers = protocol.measured_registers;

  std::map<std::vector<int>, std::int64_t> histogram;
  std::int64_t returns = 0;
  for (const TrialData& data : results) {
    if (data.has_readout) ++histogram[data.readout];
    if (data.returned) ++returns;
  }
  report.histogram.assign(histogram.begin(), histogram.end());
  report.return_rate = static_cast<double>(returns) / static_cast<double>(n);
  report.bayes_factor = bayes_factor(returns, n);

  // Positions of each expect register inside the readout tuple, when the
  // protocol measures them all; otherwise the verdict falls back to the
  // exact amplitude path.
  const auto& steps = protocol.protocol.steps;
  for (std::size_t e = 0; e < protocol.expect_indices.size(); ++e) {
    const std::size_t step_pos = protocol.expect_indices[e];
    const auto& expect = std::get<ExpectStep>(steps[step_pos]);

    ExpectVerdict verdict;
    verdict.step_index = static_cast<int>(step_pos) + 1;
    verdict.target_prob = expect.prob;
    verdict.tol = expect.tol;

    std::vector<std::pair<std::size_t, int>> positions;
    bool sampleable = protocol.measure_index.has_value();
    for (const auto& [name, value] : expect.assignment) {
      auto it = std::find(report.outcome_registers.begin(), report.outcome_registers.end(), name);
      if (it == report.outcome_registers.end()) {
        sampleable = false;
        break;
      }
      positions.emplace_back(
          static_cast<std::size_t>(it - report.outcome_registers.begin()), value);
    }

    const bool certain = expect.prob == 0.0 || expect.prob == 1.0;
    if ((model.variant == Model::Unitary && certain) || !sampleable) {
      // Amplitude-exact verdict; under unitary dynamics every trial sees the
      // same pre-measurement state, so trial 0 decides.
      double observed = 0.0;
      if (model.variant == Model::Unitary) {
        observed = results.front().expect_probs[e];
      } else {
        for (const TrialData& data : results) observed += data.expect_probs[e];
        observed /= static_cast<double>(n);
      }
      verdict.observed_prob = observed;
      verdict.exact = true;
      verdict.pass = std::abs(observed - expect.prob) <= expect.tol;
    } else {
      std::int64_t matches = 0;
      for (const TrialData& data : results) {
        bool match = true;
        for (const auto& [pos, value] : positions) {
          if (data.readout[pos] != value) {
            match = false;
            break;
          }
        }
        if (match) ++matches;
      }
      const double observed = static_cast<double>(matches) / static_cast<double>(n);
      const double slack =
          3.0 * std::sqrt(expect.prob * (1.0 - expect.prob) / static_cast<double>(n));
      verdict.observed_prob = observed;
      verdict.exact = false;
      verdict.pass = std::abs(observed - expect.prob) <= expect.tol + slack;
    }
    report.expectations.push_back(verdict);
  }

  const auto end = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

double bayes_factor(std::int64_t k, std::int64_t n, double p_unitary, double p_collapse) {
  if (n < 0 || k < 0 || k > n) {
    throw SimError(ErrorCode::InvalidCounts,
                   "need 0 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
  if (!(p_unitary >= 0.0 && p_unitary <= 1.0) || !(p_collapse > 0.0 && p_collapse < 1.0)) {
    throw SimError(ErrorCode::InvalidCounts,
                   "need p_unitary in [0,1] and p_collapse in (0,1)");
  }
  if (p_unitary == 1.0) {
    if (k < n) return 0.0;  // one failed return falsifies pure unitarity
    return std::pow(1.0 / p_collapse, static_cast<double>(n));
  }
  if (p_unitary == 0.0) {
    if (k > 0) return 0.0;
    return std::pow(1.0 / (1.0 - p_collapse), static_cast<double>(n));
  }
  const double log_unitary = static_cast<double>(k) * std::log(p_unitary) +
                             static_cast<double>(n - k) * std::log1p(-p_unitary);
  const double log_collapse = static_cast<double>(k) * std::log(p_collapse) +
                              static_cast<double>(n - k) * std::log1p(-p_collapse);
  return std::exp(log_unitary - log_collapse);
}

int trials_to_threshold(double bayes_threshold) {
  if (!(bayes_threshold > 1.0) || !std::isfinite(bayes_threshold)) {
    throw SimError(ErrorCode::InvalidThreshold, "bayes threshold must be a finite value > 1");
  }
  int n = 1;
  double factor = 2.0;
  while (factor < bayes_threshold) {
    factor *= 2.0;
    ++n;
  }
  return n;
}

}  // namespace wignersim
