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

#include "wignersim/report.hpp"

#include <cmath>

namespace wignersim {

nlohmann::ordered_json report_to_json(const TrialReport& report) {
  nlohmann::ordered_json doc;
  doc["format_version"] = 1;
  doc["protocol"] = report.protocol;
  doc["model"] = model_name(report.model);
  doc["trials"] = report.trials;
  doc["seed"] = report.seed;

  auto histogram = nlohmann::ordered_json::array();
  for (const auto& [outcome, count] : report.histogram) {
    nlohmann::ordered_json entry;
    entry["outcome"] = outcome;
    entry["count"] = count;
    histogram.push_back(std::move(entry));
  }
  doc["histogram"] = std::move(histogram);

  auto expectations = nlohmann::ordered_json::array();
  for (const auto& verdict : report.expectations) {
    nlohmann::ordered_json entry;
    entry["step"] = verdict.step_index;
    entry["target_prob"] = verdict.target_prob;
    entry["observed_prob"] = verdict.observed_prob;
    entry["tol"] = verdict.tol;
    entry["pass"] = verdict.pass;
    expectations.push_back(std::move(entry));
  }
  doc["expectations"] = std::move(expectations);

  doc["return_rate"] = report.return_rate;
  if (std::isfinite(report.bayes_factor)) {
    doc["bayes_factor"] = report.bayes_factor;
  } else {
    doc["bayes_factor"] = nullptr;
  }
  doc["wall_ms"] = report.wall_ms;
  return doc;
}

std::string report_to_json_string(const TrialReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

std::string report_to_tsv(const TrialReport& report) {
  std::string out;
  for (const auto& name : report.outcome_registers) {
    out += name;
    out += '\t';
  }
  out += "count\n";
  for (const auto& [outcome, count] : report.histogram) {
    for (int value : outcome) {
      out += std::to_string(value);
      out += '\t';
    }
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

}  // namespace wignersim
