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

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "haarlab/cli/config.hpp"
#include "haarlab/cli/runner.hpp"

namespace haarlab::cli {

/// The payload has no tabular form in the requested format.
class FormatUnsupported : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Writing to the destination failed; the message names the path.
class OutputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One JSON object, keys in schema order, no trailing newline.
[[nodiscard]] std::string to_jsonl(const ResultRecord &record);

/// Inverse of to_jsonl. Throws std::invalid_argument on malformed input.
[[nodiscard]] ResultRecord from_jsonl(const std::string &line);

/// Table for curve, event-rate and unitarity payloads.
[[nodiscard]] std::string to_csv(const ResultRecord &record);

[[nodiscard]] std::string to_text(const ResultRecord &record);

void write_results(const ResultRecord &record, OutputFormat format,
                   std::ostream &os);

/// Writes to `path`, or to standard output when path is empty or "-".
void write_results(const ResultRecord &record, OutputFormat format,
                   const std::string &path);

} // namespace haarlab::cli
