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

#include "haarlab/cli/output.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

namespace haarlab::cli {

namespace {

std::string cell(const Json &v) {
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

std::string table(const Json &rows, const std::vector<std::string> &columns) {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << columns[i];
    }
    os << '\n';
    for (const Json &row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            os << (i ? "," : "") << cell(row.at(columns[i]));
        }
        os << '\n';
    }
    return os.str();
}

const char *verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

} // namespace

std::string to_jsonl(const ResultRecord &record) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["experiment"] = record.experiment;
    j["seed"] = record.seed;
    j["params"] = record.params;
    j["payload"] = record.payload;
    j["warnings"] = record.warnings;
    j["timestamp"] = record.timestamp;
    j["runtime_seconds"] = record.runtime_seconds;
    return j.dump();
}

ResultRecord from_jsonl(const std::string &line) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::exception &e) {
        throw std::invalid_argument(std::string("malformed record: ") + e.what());
    }
    if (!j.is_object() || j.value("schema_version", "") != kSchemaVersion) {
        throw std::invalid_argument("record is not schema version 1");
    }
    try {
        ResultRecord r;
        r.experiment = j.at("experiment").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.params = j.at("params");
        r.payload = j.at("payload");
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.timestamp = j.at("timestamp").get<std::string>();
        r.runtime_seconds = j.at("runtime_seconds").get<double>();
        return r;
    } catch (const Json::exception &e) {
        throw std::invalid_argument(std::string("incomplete record: ") + e.what());
    }
}

std::string to_csv(const ResultRecord &record) {
    const Json &p = record.payload;
    if (p.contains("error")) {
        throw FormatUnsupported("csv: payload of " + record.experiment +
                                " holds an error, not a table");
    }
    if (record.experiment == "converge") {
        return table(p.at("points"),
                     {"n", "trials", "successes", "p_hat", "ci_low", "ci_high"});
    }
    if (record.experiment == "events") {
        return table(p.at("estimates"),
                     {"name", "hits", "trials", "rate", "mc_sigma", "bound", "pass"});
    }
    if (record.experiment == "unitarity") {
        return table(p.at("sizes"),
                     {"n", "k", "trials", "max_orthonormality_error",
                      "max_triangularity_error", "rank_deficient", "pass"});
    }
    throw FormatUnsupported("csv: experiment " + record.experiment +
                            " has no tabular payload; use jsonl or text");
}

std::string to_text(const ResultRecord &record) {
    std::ostringstream os;
    const Json &p = record.payload;
    os << record.experiment << " (seed " << record.seed << "): "
       << verdict(record.pass()) << '\n';
    os << "params: " << record.params.dump() << '\n';
    for (const std::string &w : record.warnings) {
        os << "warning: " << w << '\n';
    }
    if (p.contains("error")) {
        os << "error: " << cell(p["error"].at("type")) << ": "
           << cell(p["error"].at("message")) << '\n';
    }
    if (p.contains("points")) {
        os << "n        successes/trials  p_hat     95% CI\n";
        for (const Json &pt : p["points"]) {
            char line[160];
            std::snprintf(line, sizeof line, "%-8zu %7zu/%-9zu %.4f    [%.4f, %.4f]\n",
                          pt.at("n").get<std::size_t>(),
                          pt.at("successes").get<std::size_t>(),
                          pt.at("trials").get<std::size_t>(),
                          pt.at("p_hat").get<double>(), pt.at("ci_low").get<double>(),
                          pt.at("ci_high").get<double>());
            os << line;
        }
    }
    if (p.contains("estimates")) {
        for (const Json &e : p["estimates"]) {
            char line[160];
            std::snprintf(line, sizeof line, "%s %-10s rate %.5f  reference %.5f  sigma %.5f\n",
                          verdict(e.at("pass").get<bool>()),
                          e.at("name").get<std::string>().c_str(),
                          e.at("rate").get<double>(), e.at("bound").get<double>(),
                          e.at("mc_sigma").get<double>());
            os << line;
        }
    }
    if (p.contains("ledger")) {
        os << "n0 = " << p.at("n0") << ", n = " << p.at("n") << ", in D: "
           << p.at("in_d") << "/" << p.at("trials")
           << ", IA2 violations in D: " << p.at("ia2_violations_in_d")
           << ", failed certificates in D: " << p.at("failures_in_d") << '\n';
        for (const Json &c : p["ledger"].at("conditions")) {
            os << "  n > " << c.at("bound") << "  (" << cell(c.at("name")) << ")\n";
        }
    }
    if (p.contains("sizes")) {
        for (const Json &s : p["sizes"]) {
            os << verdict(s.at("pass").get<bool>()) << " n=" << s.at("n")
               << " k=" << s.at("k")
               << " max|U^+U - I| = " << s.at("max_orthonormality_error")
               << " triangularity = " << s.at("max_triangularity_error") << '\n';
        }
    }
    if (p.contains("tests")) {
        for (const Json &t : p["tests"]) {
            os << verdict(t.at("pass").get<bool>()) << ' '
               << cell(t.at("description")) << ": " << t.at("statistic")
               << " (threshold " << t.at("threshold") << ")\n";
        }
    }
    if (p.contains("adversarial")) {
        const Json &a = p["adversarial"];
        os << "adversarial selection: mean n|U|^2 = " << a.at("mean_scaled_abs2")
           << " vs baseline " << a.at("baseline") << " (z = " << a.at("z_score")
           << ")\n";
    }
    char runtime[64];
    std::snprintf(runtime, sizeof runtime, "runtime %.2f s\n", record.runtime_seconds);
    os << runtime;
    return os.str();
}

void write_results(const ResultRecord &record, OutputFormat format,
                   std::ostream &os) {
    switch (format) {
    case OutputFormat::jsonl:
        os << to_jsonl(record) << '\n';
        break;
    case OutputFormat::csv:
        os << to_csv(record);
        break;
    case OutputFormat::text:
        os << to_text(record);
        break;
    }
}

void write_results(const ResultRecord &record, OutputFormat format,
                   const std::string &path) {
    if (path.empty() || path == "-") {
        write_results(record, format, std::cout);
        std::cout.flush();
        if (!std::cout) {
            throw OutputError("failed writing to standard output");
        }
        return;
    }
    // Render first so a FormatUnsupported error leaves no partial file.
    std::ostringstream buffer;
    write_results(record, format, buffer);
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw OutputError("cannot open '" + path + "' for writing: " +
                          std::strerror(errno));
    }
    out << buffer.str();
    out.flush();
    if (!out) {
        throw OutputError("failed writing '" + path + "'");
    }
}

} // namespace haarlab::cli
