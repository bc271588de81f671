// Copyright 2026 The haarlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "haarlab/cli/config.hpp"

namespace haarlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char *kSchemaVersion = "1";

/// Input the experiment needs but cannot read (e.g. a missing rho file).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ResultRecord {
    std::string experiment;
    std::uint64_t seed = 0;
    Json params;  // experiment parameters only; run options are excluded
    Json payload; // deterministic given (experiment, params, seed)
    std::vector<std::string> warnings;
    std::string timestamp; // UTC, ISO 8601
    double runtime_seconds = 0.0;

    /// The payload's overall verdict; false when the payload holds an error.
    [[nodiscard]] bool pass() const;
};

using ProgressFn = std::function<void(std::string_view)>;

/// Parameters of a config as JSON, in the canonical key order.
[[nodiscard]] Json params_json(const ExperimentConfig &config);

/// Rebuilds a configuration from the echo stored in a record.
[[nodiscard]] ExperimentConfig config_from_record(const ResultRecord &record);

/**
 * Runs one experiment. Statistical failures and sampler errors end up in
 * the payload (`pass` false, or an `error` object); only unreadable inputs
 * throw InputError. The worker count never changes the payload.
 */
[[nodiscard]] ResultRecord run_experiment(const ExperimentConfig &config,
                                          const ProgressFn &progress = {});

} // namespace haarlab::cli
