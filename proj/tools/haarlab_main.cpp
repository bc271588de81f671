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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "haarlab/cli/config.hpp"
#include "haarlab/cli/output.hpp"
#include "haarlab/cli/runner.hpp"

namespace {

constexpr int kExitStrictFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw haarlab::cli::InputError("cannot open config '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char **argv) {
    using namespace haarlab::cli;

    CLI::App app{"Monte Carlo experiments on Haar-random unitaries"};
    app.set_version_flag("--version", "haarlab 0.1.0");

    std::string experiment;
    std::string config_path;
    std::vector<std::string> assignments;
    bool print_config = false;
    std::string experiments_help = "one of:";
    for (const std::string &name : experiment_names()) {
        experiments_help += " " + name;
    }
    app.add_option("experiment", experiment, experiments_help);
    app.add_option("--config", config_path, "key = value configuration file");

    // Flags become settings that override the file.
    struct FlagValue {
        std::string key;
        std::string value;
        CLI::Option *option = nullptr;
    };
    std::vector<FlagValue> flags = {
        {"seed", {}, nullptr},    {"trials", {}, nullptr}, {"k", {}, nullptr},
        {"eps", {}, nullptr},     {"delta", {}, nullptr},  {"n", {}, nullptr},
        {"ns", {}, nullptr},      {"rho", {}, nullptr},    {"alpha", {}, nullptr},
        {"format", {}, nullptr},  {"out", {}, nullptr},    {"workers", {}, nullptr},
    };
    for (FlagValue &f : flags) {
        f.option = app.add_option("--" + f.key, f.value);
    }
    flags[0].option->description("master seed (default: $" +
                                 std::string(kSeedEnvVar) + ", then 0)");
    flags[5].option->excludes(flags[6].option);
    flags[6].option->description("comma-separated list of n");
    flags[9].option->description("jsonl, csv or text");
    flags[10].option->description("output file (default: standard output)");
    bool strict = false;
    app.add_flag("--strict", strict, "exit 1 when the payload does not pass");
    app.add_option("--set", assignments, "extra key=value setting (repeatable)");
    app.add_flag("--print-config", print_config,
                 "print the validated configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    }

    ExperimentConfig config;
    try {
        std::vector<Setting> overrides;
        if (!experiment.empty()) {
            overrides.push_back({"experiment", experiment, "argument"});
        }
        for (const FlagValue &f : flags) {
            if (f.option->count() > 0) {
                overrides.push_back({f.key, f.value, "flag --" + f.key});
            }
        }
        if (strict) {
            overrides.push_back({"strict", "true", "flag --strict"});
        }
        for (const std::string &a : assignments) {
            const auto eq = a.find('=');
            if (eq == std::string::npos) {
                std::cerr << "haarlab: --set expects key=value, got '" << a << "'\n";
                return kExitConfig;
            }
            overrides.push_back(
                {a.substr(0, eq), a.substr(eq + 1), "flag --set " + a.substr(0, eq)});
        }
        const std::string source = config_path.empty() ? "" : read_file(config_path);
        const char *env = std::getenv(kSeedEnvVar);
        config = parse_config(source, overrides,
                              env ? std::optional<std::string>(env) : std::nullopt);
    } catch (const ConfigError &e) {
        std::cerr << "haarlab: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError &e) {
        std::cerr << "haarlab: " << e.what() << '\n';
        return kExitIo;
    }

    for (const std::string &w : config.warnings) {
        std::cerr << "haarlab: warning: " << w << '\n';
    }
    if (print_config) {
        std::cout << render_config(config);
        return 0;
    }

    try {
        const ResultRecord record = run_experiment(
            config, [](std::string_view msg) { std::cerr << "haarlab: " << msg << '\n'; });
        write_results(record, config.format, config.out);
        std::cerr << "haarlab: " << config.experiment << " finished in "
                  << record.runtime_seconds << " s, "
                  << (record.pass() ? "pass" : "fail") << '\n';
        if (config.strict && !record.pass()) {
            return kExitStrictFailure;
        }
    } catch (const InputError &e) {
        std::cerr << "haarlab: " << e.what() << '\n';
        return kExitIo;
    } catch (const OutputError &e) {
        std::cerr << "haarlab: " << e.what() << '\n';
        return kExitIo;
    } catch (const FormatUnsupported &e) {
        std::cerr << "haarlab: " << e.what() << '\n';
        return kExitConfig;
    }
    return 0;
}
