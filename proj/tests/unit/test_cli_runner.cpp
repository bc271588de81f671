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

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "haarlab/cli/config.hpp"
#include "haarlab/cli/output.hpp"
#include "haarlab/cli/runner.hpp"

using namespace haarlab;
using namespace haarlab::cli;
using Catch::Matchers::ContainsSubstring;

namespace {

std::vector<std::string> errors_of(std::string_view source,
                                   const std::vector<Setting> &overrides = {}) {
    try {
        (void)parse_config(source, overrides);
    } catch (const ConfigError &e) {
        return e.errors();
    }
    return {};
}

bool any_contains(const std::vector<std::string> &v, const std::string &needle) {
    for (const std::string &s : v) {
        if (s.find(needle) != std::string::npos) {
            return true;
        }
    }
    return false;
}

constexpr const char *kConverge =
    "experiment = converge\nk = 2\neps = 1.0\nns = 16,64,256\ntrials = 2000\nseed = 42\n";

} // namespace

TEST_CASE("documented converge example parses", "[config]") {
    const ExperimentConfig c = parse_config(kConverge);
    CHECK(c.experiment == "converge");
    CHECK(c.k == 2u);
    CHECK(c.eps == 1.0);
    CHECK(c.ns == std::vector<std::size_t>{16, 64, 256});
    CHECK(c.trials == 2000u);
    CHECK(c.seed == 42);
    CHECK(c.seed_given);
    CHECK(c.warnings.empty());
}

TEST_CASE("comments, blank lines and spacing are tolerated", "[config]") {
    const ExperimentConfig c = parse_config(
        "# header\n\n  experiment=sphere   # trailing\nn=64\r\nk = 1\ntrials = 1e3\n");
    CHECK(c.experiment == "sphere");
    CHECK(c.trials == 1000u);
}

TEST_CASE("out-of-range delta is reported with its line", "[config]") {
    const auto errors = errors_of(
        "experiment = events\nn = 100\nk = 2\ndelta = 1.5\ntrials = 10\n");
    REQUIRE(errors.size() == 1);
    CHECK_THAT(errors[0], ContainsSubstring("line 4"));
    CHECK_THAT(errors[0], ContainsSubstring("delta must lie in (0,1)"));
}

TEST_CASE("every problem is reported, not just the first", "[config]") {
    const auto errors = errors_of(
        "experiment = certificate\nbogus = 1\nk = two\neps = -1\nthis line is broken\n");
    CHECK(any_contains(errors, "line 2: bogus: unknown key"));
    CHECK(any_contains(errors, "line 3: k:"));
    CHECK(any_contains(errors, "line 4: eps: eps must be positive"));
    CHECK(any_contains(errors, "line 5: expected 'key = value'"));
    CHECK(any_contains(errors, "missing required key 'delta'"));
    CHECK(any_contains(errors, "missing required key 'trials'"));
    CHECK(errors_of("k = 1\n").size() >= 1);
    CHECK(any_contains(errors_of("experiment = teleport\n"), "unknown experiment"));
}

TEST_CASE("experiment-specific requirements", "[config]") {
    CHECK(any_contains(errors_of("experiment = gaussianity\nn = 8\nk = 2\ntrials = 500\n"),
                       "at least 1000 trials"));
    CHECK(any_contains(errors_of("experiment = gaussianity\nn = 2\nk = 3\ntrials = 5000\n"),
                       "n must be >= k"));
    CHECK(any_contains(errors_of("experiment = gap-check\ntrials = 5000\n"),
                       "exactly one of rho, spectrum, energies"));
    CHECK(any_contains(errors_of("experiment = gap-check\ntrials = 5000\nenergies = 0,1\n"),
                       "energies requires beta"));
    CHECK(any_contains(errors_of("experiment = gap-check\ntrials = 5000\nspectrum = 0.5,0.6\n"),
                       "weights must sum to 1"));
    CHECK(any_contains(errors_of("experiment = condwf-check\nc = 1, 1\nn = 8\ntrials = 5000\n"),
                       "sum of |c_i|^2 must be 1"));
    CHECK(any_contains(errors_of("experiment = condwf-check\nc = 0.6, 0:0.8\nn = 1\ntrials = 5000\n"),
                       "at least the number of Schmidt coefficients"));
    CHECK(any_contains(errors_of("experiment = invariance\nn = 8\nk = 2\ntrials = 10\n"
                                 "selections = 1,2|1,9\n"),
                       "distinct rows and columns"));
    CHECK(any_contains(errors_of(std::string(kConverge) + "workers = 0\n"), "workers"));
    CHECK(any_contains(errors_of(std::string(kConverge) + "format = xml\n"),
                       "jsonl, csv or text"));
}

TEST_CASE("seed defaults and precedence", "[config]") {
    const std::string no_seed = "experiment = sphere\nn = 64\nk = 1\ntrials = 200\n";
    const ExperimentConfig d = parse_config(no_seed);
    CHECK(d.seed == kDefaultSeed);
    CHECK_FALSE(d.seed_given);
    CHECK(any_contains(d.warnings, "default seed 0"));

    const ExperimentConfig env = parse_config(no_seed, {}, std::string("77"));
    CHECK(env.seed == 77);
    CHECK(any_contains(env.warnings, kSeedEnvVar));

    const ExperimentConfig file = parse_config(no_seed + "seed = 5\n", {}, std::string("77"));
    CHECK(file.seed == 5);
    const ExperimentConfig flag =
        parse_config(no_seed + "seed = 5\n", {{"seed", "9", "flag --seed"}}, std::string("77"));
    CHECK(flag.seed == 9);
    CHECK(any_contains(errors_of(no_seed, {{"seed", "-3", "flag --seed"}}), "flag --seed"));
}

TEST_CASE("flags override file values", "[config]") {
    const ExperimentConfig c =
        parse_config(kConverge, {{"trials", "300", "flag --trials"}, {"k", "1", "flag --k"}});
    CHECK(c.trials == 300u);
    CHECK(c.k == 1u);
}

TEST_CASE("inapplicable keys warn", "[config]") {
    const ExperimentConfig c = parse_config(std::string(kConverge) + "delta = 0.1\n");
    CHECK(any_contains(c.warnings, "'delta' is ignored by experiment converge"));
}

TEST_CASE("rendered configs parse back to the same parameters", "[config][property]") {
    const std::vector<std::string> sources = {
        kConverge,
        "experiment = certificate\nk = 2\ndelta = 0.04\neps = 0.5\ntrials = 10\nR = 1.7\nseed = 1\n",
        "experiment = condwf-check\nc = 0.6, 0:0.8\nn = 16\ntrials = 1000\nalpha = 0.05\nseed = 2\n",
        "experiment = invariance\nn = 8\nk = 2\ntrials = 10\nselections = 1,2|1,2; 7,8|7,8\nseed = 3\n",
        "experiment = gap-check\nenergies = 0, 0.6931471805599453\nbeta = 1\ntrials = 1000\nseed = 4\n",
    };
    for (const std::string &src : sources) {
        const ExperimentConfig a = parse_config(src);
        const ExperimentConfig b = parse_config(render_config(a));
        CHECK(params_json(a) == params_json(b));
        CHECK(a.seed == b.seed);
        CHECK(a.experiment == b.experiment);
    }
}

TEST_CASE("converge run yields one point per size and is reproducible", "[runner]") {
    ExperimentConfig c = parse_config(kConverge);
    c.trials = 200;
    const ResultRecord a = run_experiment(c);
    REQUIRE(a.payload.at("points").size() == 3);
    CHECK(a.payload.at("points")[0].at("n") == 16);
    c.workers = 3;
    const ResultRecord b = run_experiment(c);
    CHECK(a.payload.dump() == b.payload.dump());
    CHECK(a.params == b.params);
}

TEST_CASE("certificate run reports n0 and no IA2 violations", "[runner]") {
    const ExperimentConfig c = parse_config(
        "experiment = certificate\nk = 1\ndelta = 0.04\neps = 0.5\nn = 2000\n"
        "trials = 100\nseed = 7\n");
    const ResultRecord r = run_experiment(c);
    CHECK(r.payload.at("n0") == 1288);
    CHECK(r.payload.at("ia2_violations_in_d") == 0);
    CHECK(r.pass());
    const Json &first = r.payload.at("reports").at(0).at("checks").at(0);
    CHECK(first.contains("name"));
    CHECK(first.contains("lhs"));
    CHECK(first.contains("rhs"));
    CHECK(first.contains("pass"));
}

TEST_CASE("records round-trip through JSON lines", "[output]") {
    ExperimentConfig c = parse_config(kConverge);
    c.trials = 100;
    const ResultRecord r = run_experiment(c);
    const std::string line = to_jsonl(r);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.rfind("{\"schema_version\":\"1\",\"experiment\":\"converge\",\"seed\":42,"
                     "\"params\":",
                     0) == 0);
    const std::size_t payload = line.find("\"payload\"");
    const std::size_t warnings = line.find("\"warnings\"");
    const std::size_t timestamp = line.find("\"timestamp\"");
    const std::size_t runtime = line.find("\"runtime_seconds\"");
    CHECK(payload < warnings);
    CHECK(warnings < timestamp);
    CHECK(timestamp < runtime);

    const ResultRecord back = from_jsonl(line);
    CHECK(back.experiment == r.experiment);
    CHECK(back.seed == r.seed);
    CHECK(back.params == r.params);
    CHECK(back.payload == r.payload);
    CHECK(back.timestamp == r.timestamp);
    CHECK(back.runtime_seconds == r.runtime_seconds);
    CHECK(to_jsonl(back) == line);

    const ExperimentConfig echo = config_from_record(back);
    CHECK(params_json(echo) == params_json(c));
    CHECK_THROWS_AS(from_jsonl("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(from_jsonl("{\"schema_version\":\"2\"}"), std::invalid_argument);
}

TEST_CASE("CSV covers tabular payloads only", "[output]") {
    ExperimentConfig c = parse_config(kConverge);
    c.trials = 100;
    const std::string csv = to_csv(run_experiment(c));
    CHECK(csv.rfind("n,trials,successes,p_hat,ci_low,ci_high\n16,100,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

    const ResultRecord sphere = run_experiment(
        parse_config("experiment = sphere\nn = 64\nk = 1\ntrials = 200\nseed = 1\n"));
    CHECK_THROWS_AS(to_csv(sphere), FormatUnsupported);
    CHECK_THAT(to_text(sphere), ContainsSubstring("KS Re sqrt(n)x_1"));
}

TEST_CASE("every experiment runs and is worker independent", "[runner]") {
    const std::vector<std::string> sources = {
        "experiment = unitarity\nns = 2,8\nk = 4\ntrials = 5\n",
        "experiment = events\nn = 200\nk = 2\ndelta = 0.1\ntrials = 200\n",
        "experiment = gaussianity\nn = 64\nk = 1\ntrials = 1000\n",
        "experiment = independence\nn = 64\nk = 2\ntrials = 1000\n",
        "experiment = invariance\nn = 8\nk = 2\ntrials = 200\n",
        "experiment = gap-check\nspectrum = 0.6,0.4\ntrials = 1000\n",
        "experiment = condwf-check\nc = 0.8, 0.6\nn = 32\ntrials = 1000\n",
        "experiment = sphere\nn = 64\nk = 2\ntrials = 200\n",
    };
    for (const std::string &src : sources) {
        ExperimentConfig c = parse_config(src + "seed = 11\n");
        const ResultRecord a = run_experiment(c);
        INFO(c.experiment);
        CHECK_FALSE(a.payload.contains("error"));
        CHECK(a.payload.contains("pass"));
        c.workers = 4;
        CHECK(run_experiment(c).payload.dump() == a.payload.dump());
    }
}

TEST_CASE("missing inputs and unwritable outputs name their path", "[output]") {
    const ExperimentConfig c = parse_config(
        "experiment = gap-check\nrho = /nonexistent/rho.txt\ntrials = 1000\nseed = 1\n");
    CHECK_THROWS_WITH(run_experiment(c), ContainsSubstring("/nonexistent/rho.txt"));

    ExperimentConfig small = parse_config(kConverge);
    small.trials = 100;
    const ResultRecord r = run_experiment(small);
    CHECK_THROWS_WITH(write_results(r, OutputFormat::jsonl, "/nonexistent/dir/out.jsonl"),
                      ContainsSubstring("/nonexistent/dir/out.jsonl"));

    const auto path = std::filesystem::temp_directory_path() / "haarlab_cli_test.csv";
    write_results(r, OutputFormat::csv, path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,trials,successes,p_hat,ci_low,ci_high");
    std::filesystem::remove(path);
}

TEST_CASE("rho files load through the runner", "[runner]") {
    const auto path = std::filesystem::temp_directory_path() / "haarlab_rho_test.txt";
    {
        std::ofstream out(path);
        out << "density-matrix v1 2\n0.7,0 0,0\n0,0 0.3,0\n";
    }
    const ExperimentConfig c = parse_config(
        "experiment = gap-check\nrho = " + path.string() + "\ntrials = 1000\nseed = 1\n");
    const ResultRecord r = run_experiment(c);
    CHECK(r.payload.at("rho").at("eigenvalues")[0].get<double>() == Catch::Approx(0.7));
    std::filesystem::remove(path);
}
