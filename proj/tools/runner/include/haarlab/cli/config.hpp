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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "haarlab/complex_matrix.hpp"
#include "haarlab/dist_tests.hpp"

namespace haarlab::cli {

/// Environment variable consulted when neither the file nor a flag sets a seed.
inline constexpr const char *kSeedEnvVar = "HAARLAB_SEED";
inline constexpr std::uint64_t kDefaultSeed = 0;

/// Experiments the runner knows, in documentation order.
[[nodiscard]] const std::vector<std::string> &experiment_names();

enum class OutputFormat { jsonl, csv, text };

[[nodiscard]] std::string to_string(OutputFormat f);

/// One raw `key = value` assignment and where it came from ("line 4",
/// "flag --k").
struct Setting {
    std::string key;
    std::string value;
    std::string origin;
};

/// All problems found in a configuration, each with its provenance.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    [[nodiscard]] const std::vector<std::string> &errors() const noexcept {
        return errors_;
    }

  private:
    std::vector<std::string> errors_;
};

struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = kDefaultSeed;
    bool seed_given = false;

    // Experiment parameters. Unset optionals were not supplied.
    std::optional<std::size_t> k;
    std::optional<std::size_t> n;
    std::vector<std::size_t> ns;
    std::optional<std::size_t> trials;
    std::optional<double> eps;
    std::optional<double> delta;
    std::optional<double> radius; // key R
    std::optional<double> alpha;
    std::optional<double> beta;
    std::vector<double> spectrum;
    std::vector<double> energies;
    std::vector<Complex> schmidt; // key c
    std::string rho_path;         // key rho
    std::vector<Selection> selections;

    // Run options; never part of the result payload.
    OutputFormat format = OutputFormat::jsonl;
    std::string out; // empty: standard output
    unsigned workers = 1;
    bool strict = false;

    /// Non-fatal notes, e.g. the default-seed fallback.
    std::vector<std::string> warnings;
};

/// Splits `key = value` lines; '#' starts a comment. Throws ConfigError on
/// malformed lines.
[[nodiscard]] std::vector<Setting> parse_settings(std::string_view source);

/**
 * Parses and validates a configuration. Later settings win, so `overrides`
 * (command-line flags) beat the file. The seed falls back to `env_seed`,
 * then to kDefaultSeed, recording a warning. Throws ConfigError listing
 * every problem found.
 */
[[nodiscard]] ExperimentConfig
parse_config(std::string_view source,
             const std::vector<Setting> &overrides = {},
             std::optional<std::string> env_seed = std::nullopt);

/// Canonical `key = value` text for the experiment parameters and seed.
/// parse_config(render_config(c)) reproduces every parameter of c.
[[nodiscard]] std::string render_config(const ExperimentConfig &config);

} // namespace haarlab::cli
