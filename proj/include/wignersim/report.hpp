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

#include <string>

#include <nlohmann/json.hpp>

#include "wignersim/trials.hpp"

namespace wignersim {

/// Frozen report schema, format_version 1. Keys, in order: format_version,
/// protocol, model, trials, seed, histogram, expectations, return_rate,
/// bayes_factor, wall_ms. A non-finite bayes factor serializes as null.
nlohmann::ordered_json report_to_json(const TrialReport& report);

/// report_to_json rendered with 2-space indentation and a trailing newline.
std::string report_to_json_string(const TrialReport& report);

/// Histogram as tab-separated values: a fixed header row of the measured
/// register names plus "count", then one outcome tuple per row in ascending
/// order.
std::string report_to_tsv(const TrialReport& report);

}  // namespace wignersim
