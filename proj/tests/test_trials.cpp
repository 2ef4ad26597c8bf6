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

#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "helpers.hpp"
#include "wignersim/report.hpp"
#include "wignersim/trials.hpp"

using namespace wignersim;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    return e.code();
  }
  FAIL("expected a SimError");
  return ErrorCode::Syntax;
}

std::int64_t count_matching(const TrialReport& report, int position, int value) {
  std::int64_t total = 0;
  for (const auto& [outcome, count] : report.histogram) {
    if (outcome[static_cast<std::size_t>(position)] == value) total += count;
  }
  return total;
}

// Wilson score interval bounds at confidence z.
std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z) {
  const double p_hat = static_cast<double>(k) / static_cast<double>(n);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / static_cast<double>(n);
  const double center = p_hat + z2 / (2.0 * static_cast<double>(n));
  const double margin =
      z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n) +
                    z2 / (4.0 * static_cast<double>(n) * static_cast<double>(n)));
  return {(center - margin) / denom, (center + margin) / denom};
}

}  // namespace

TEST_SUITE_BEGIN("trials");

TEST_CASE("splitmix64 matches the published sequence for seed 0") {
  std::uint64_t state = 0;
  CHECK(splitmix64_next(state) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64_next(state) == 0x6e789e6aa1b965f4ULL);
  CHECK(splitmix64_next(state) == 0x06c45d188009454fULL);
}

TEST_CASE("trial streams are pinned bit-exactly") {
  // Frozen from an independent implementation of the documented scheme:
  // seed(i) = master ^ (i+1)*0x9E3779B97F4A7C15, xoshiro256** state from
  // four SplitMix64 outputs.
  RngStream stream = RngStream::for_trial(42, 0);
  CHECK(stream.next_u64() == 0xbe15272cdf80b6c2ULL);
  CHECK(stream.next_u64() == 0xaf6e2ee49ff5d0e3ULL);
  CHECK(stream.next_u64() == 0xca56edd0338a318fULL);
  CHECK(stream.next_u64() == 0x4945f1d915ae1af2ULL);

  RngStream uniforms = RngStream::for_trial(42, 0);
  CHECK(uniforms.uniform() == 0.7425102695992816);
  CHECK(uniforms.uniform() == 0.6852750118414044);
  CHECK(uniforms.uniform() == 0.7903889306358358);
  CHECK(uniforms.uniform() == 0.28622352170867094);

  RngStream zero_seed = RngStream::for_trial(0, 0);
  CHECK(zero_seed.next_u64() == 0x422ea740d0977210ULL);
  CHECK(zero_seed.next_u64() == 0xe062b061b42e2928ULL);
}

TEST_CASE("uniforms stay in [0,1) and streams differ per trial") {
  RngStream a = RngStream::for_trial(7, 1);
  RngStream b = RngStream::for_trial(7, 2);
  bool differ = false;
  for (int k = 0; k < 64; ++k) {
    double ua = a.uniform();
    double ub = b.uniform();
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
    if (ua != ub) differ = true;
  }
  CHECK(differ);
}

TEST_CASE("unitary trials return every time") {
  ValidatedProtocol vp = validate(builtin("deutsch-wigner"));
  DynamicsModel model{Model::Unitary, std::nullopt};
  TrialReport report = run_trials(vp, model, 1000, 7);

  REQUIRE(report.histogram.size() == 1);
  CHECK(report.histogram[0].first == std::vector<int>{0, 0, 0, 0, 1});
  CHECK(report.histogram[0].second == 1000);
  CHECK(report.return_rate == 1.0);
  CHECK(report.bayes_factor == std::pow(2.0, 1000.0));
  REQUIRE(report.expectations.size() == 1);
  CHECK(report.expectations[0].pass);
  CHECK(report.expectations[0].exact);
  CHECK(report.expectations[0].observed_prob == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.all_expectations_pass());
}

TEST_CASE("collapse trials split the atom statistic in half") {
  ValidatedProtocol vp = validate(builtin("deutsch-wigner"));
  DynamicsModel model{Model::Collapse, std::nullopt};
  const std::int64_t n = 20000;
  TrialReport report = run_trials(vp, model, n, 42);

  // Paper written and bob/poison/cat restored in every trial.
  std::int64_t total = 0;
  for (const auto& [outcome, count] : report.histogram) {
    CHECK(outcome[1] == 0);
    CHECK(outcome[2] == 0);
    CHECK(outcome[3] == 0);
    CHECK(outcome[4] == 1);
    total += count;
  }
  CHECK(total == n);

  const std::int64_t decayed = count_matching(report, 0, 1);
  const double freq = static_cast<double>(decayed) / static_cast<double>(n);
  const double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(n));
  CHECK(freq > 0.5 - slack);
  CHECK(freq < 0.5 + slack);

  // Wilson 99% interval around the observed count contains 1/2.
  auto [lo, hi] = wilson_interval(decayed, n, 2.5758293035489004);
  CHECK(lo <= 0.5);
  CHECK(hi >= 0.5);

  // The prob=1 expectation is falsified empirically.
  REQUIRE(report.expectations.size() == 1);
  CHECK_FALSE(report.expectations[0].pass);
  CHECK_FALSE(report.expectations[0].exact);
  CHECK(report.expectations[0].observed_prob == doctest::Approx(0.5).epsilon(0.05));
  CHECK_FALSE(report.all_expectations_pass());
  CHECK(report.bayes_factor == 0.0);
  CHECK(report.return_rate == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("the atom frequency passes a two-sided binomial test across seeds") {
  // Normal-approximation binomial test at alpha = 0.001 (|z| < 3.29053).
  ValidatedProtocol vp = validate(builtin("deutsch-wigner"));
  DynamicsModel model{Model::Collapse, std::nullopt};
  const std::int64_t n = 10000;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CAPTURE(seed);
    TrialReport report = run_trials(vp, model, n, seed);
    const std::int64_t decayed = count_matching(report, 0, 1);
    const double z = (static_cast<double>(decayed) - 0.5 * static_cast<double>(n)) /
                     std::sqrt(0.25 * static_cast<double>(n));
    CHECK(std::abs(z) < 3.2905267314918945);
  }
}

TEST_CASE("photon-mirror collapse trials return half the time") {
  ValidatedProtocol vp = validate(builtin("photon-mirror"));
  DynamicsModel model{Model::Collapse, std::nullopt};
  TrialReport report = run_trials(vp, model, 10000, 3);
  const std::int64_t exits = count_matching(report, 0, 0);
  const double freq = static_cast<double>(exits) / 10000.0;
  CHECK(freq > 0.5 - 0.015);
  CHECK(freq < 0.5 + 0.015);
}

TEST_CASE("which-outcome expectation holds under both models") {
  ValidatedProtocol vp = validate(builtin("which-outcome"));
  TrialReport unitary = run_trials(vp, DynamicsModel{Model::Unitary, std::nullopt}, 4000, 5);
  REQUIRE(unitary.expectations.size() == 1);
  CHECK(unitary.expectations[0].pass);
  CHECK_FALSE(unitary.expectations[0].exact);  // prob 0.5 is sampled, not certain
  CHECK(unitary.expectations[0].observed_prob == doctest::Approx(0.5).epsilon(0.06));

  TrialReport collapse = run_trials(vp, DynamicsModel{Model::Collapse, std::nullopt}, 4000, 5);
  CHECK(collapse.expectations[0].pass);
  CHECK(collapse.expectations[0].observed_prob == doctest::Approx(0.5).epsilon(0.06));
}

TEST_CASE("reports are reproducible and thread-count independent") {
  ValidatedProtocol vp = validate(builtin("deutsch-wigner"));
  DynamicsModel model{Model::Collapse, std::nullopt};

  TrialReport a = run_trials(vp, model, 3000, 99, 1);
  TrialReport b = run_trials(vp, model, 3000, 99, 1);
  TrialReport c = run_trials(vp, model, 3000, 99, 4);
  TrialReport d = run_trials(vp, model, 3000, 99, 7);

  auto strip = [](const TrialReport& report) {
    TrialReport copy = report;
    copy.wall_ms = 0.0;
    return report_to_json_string(copy);
  };
  CHECK(strip(a) == strip(b));
  CHECK(strip(a) == strip(c));
  CHECK(strip(a) == strip(d));
}

TEST_CASE("trial errors carry the trial index") {
  Protocol p;
  p.name = "asserting";
  p.layout = RegisterLayout::make({{"a", 2}, {"b", 2}});
  p.init = {{"a", 0}, {"b", 0}};
  p.steps.push_back(SuperposeStep{"a", std::numbers::pi / 4.0, 0.0});
  p.steps.push_back(CoupleStep{"a", "b"});
  p.steps.push_back(CheckFactorizedStep{"b", 1e-10});
  ValidatedProtocol vp = validate(p);
  try {
    run_trials(vp, DynamicsModel{Model::Unitary, std::nullopt}, 5, 0);
    FAIL("expected FactorizationAssertFailed");
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::FactorizationAssertFailed);
    CHECK(std::string(e.what()).find("trial 0") != std::string::npos);
  }
}

TEST_CASE("bayes factors are exact powers of two at k = n") {
  CHECK(bayes_factor(7, 7) == 128.0);
  CHECK(bayes_factor(20, 20) == 1048576.0);
  CHECK(bayes_factor(1, 1) == 2.0);
  CHECK(bayes_factor(0, 1) == 0.0);
  CHECK(bayes_factor(999, 1000) == 0.0);
  CHECK(bayes_factor(0, 3, 0.0, 0.5) == 8.0);

  // General point hypotheses agree with the direct likelihood ratio.
  const double ratio = bayes_factor(6, 10, 0.9, 0.5);
  const double expected = (std::pow(0.9, 6) * std::pow(0.1, 4)) / std::pow(0.5, 10);
  CHECK(ratio == doctest::Approx(expected).epsilon(1e-12));

  CHECK(code_of([] { bayes_factor(5, 3); }) == ErrorCode::InvalidCounts);
  CHECK(code_of([] { bayes_factor(-1, 3); }) == ErrorCode::InvalidCounts);
  CHECK(code_of([] { bayes_factor(1, 2, 1.0, 0.0); }) == ErrorCode::InvalidCounts);
}

TEST_CASE("trials_to_threshold is the ceiling of log2") {
  CHECK(trials_to_threshold(100.0) == 7);
  CHECK(trials_to_threshold(2.0) == 1);
  CHECK(trials_to_threshold(1e6) == 20);

  // Integer-scan oracle over a range of thresholds.
  for (double threshold : {1.5, 3.0, 64.0, 65.0, 1e3, 1e9, 1e15}) {
    CAPTURE(threshold);
    int n = 1;
    while (std::pow(2.0, n) < threshold) ++n;
    CHECK(trials_to_threshold(threshold) == n);
  }

  CHECK(code_of([] { trials_to_threshold(1.0); }) == ErrorCode::InvalidThreshold);
  CHECK(code_of([] { trials_to_threshold(0.5); }) == ErrorCode::InvalidThreshold);
  CHECK(code_of([] { trials_to_threshold(std::numeric_limits<double>::infinity()); }) ==
        ErrorCode::InvalidThreshold);
}

TEST_CASE("trial counts below one are rejected") {
  ValidatedProtocol vp = validate(builtin("photon-mirror"));
  CHECK(code_of([&] {
          run_trials(vp, DynamicsModel{Model::Unitary, std::nullopt}, 0, 1);
        }) == ErrorCode::ValueOutOfRange);
}

TEST_SUITE_END();
