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

#include "haarlab/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "haarlab/gap_measures.hpp"

namespace haarlab::cli {

namespace {

struct ExperimentSpec {
    std::string name;
    std::vector<std::string> required;
    std::vector<std::string> optional;
    std::size_t min_trials;
};

const std::vector<ExperimentSpec> &specs() {
    static const std::vector<ExperimentSpec> table = {
        {"converge", {"k", "eps", "ns", "trials"}, {}, 100},
        {"events", {"n", "k", "delta", "trials"}, {"R"}, 1},
        {"certificate", {"k", "delta", "eps", "trials"}, {"n", "R"}, 1},
        {"gaussianity", {"n", "k", "trials"}, {"alpha"}, 1000},
        {"independence", {"n", "k", "trials"}, {}, 1000},
        {"invariance", {"n", "k", "trials"}, {"selections"}, 2},
        {"gap-check", {"trials"}, {"rho", "spectrum", "energies", "beta", "alpha"}, 1000},
        {"condwf-check", {"c", "n", "trials"}, {"alpha"}, 1000},
        {"sphere", {"n", "k", "trials"}, {"alpha"}, 100},
        {"unitarity", {"ns", "k", "trials"}, {}, 1},
    };
    return table;
}

const ExperimentSpec *find_spec(const std::string &name) {
    for (const auto &s : specs()) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

const std::set<std::string> &run_option_keys() {
    static const std::set<std::string> keys = {"format", "out", "workers", "strict"};
    return keys;
}

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys = {
        "experiment", "seed", "k", "n", "ns", "trials", "eps", "delta", "R",
        "alpha", "beta", "spectrum", "energies", "c", "rho", "selections",
        "format", "out", "workers", "strict"};
    return keys;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) {
        out.push_back(trim(cur));
    }
    return out;
}

std::optional<double> to_real(const std::string &s) {
    if (s.empty()) {
        return std::nullopt;
    }
    errno = 0;
    char *end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

// Non-negative integers; "1e4" style is accepted when exact.
std::optional<std::size_t> to_count(const std::string &s) {
    if (s.empty() || s.front() == '-') {
        return std::nullopt;
    }
    if (std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        errno = 0;
        const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
        if (errno == ERANGE) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(v);
    }
    const auto r = to_real(s);
    if (!r || *r < 0.0 || *r > 9.0e15 || std::floor(*r) != *r) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(*r);
}

std::optional<std::uint64_t> to_seed(const std::string &s) {
    if (s.empty() || s.front() == '-') {
        return std::nullopt;
    }
    errno = 0;
    char *end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 0);
    if (end != s.c_str() + s.size() || errno == ERANGE) {
        return std::nullopt;
    }
    return static_cast<std::uint64_t>(v);
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Validator {
  public:
    void error(const Setting &s, const std::string &message) {
        errors_.push_back(s.origin + ": " + s.key + ": " + message);
    }
    void error(const std::string &message) { errors_.push_back(message); }
    [[nodiscard]] const std::vector<std::string> &errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

} // namespace

const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &s : specs()) {
            v.push_back(s.name);
        }
        return v;
    }();
    return names;
}

std::string to_string(OutputFormat f) {
    switch (f) {
    case OutputFormat::jsonl:
        return "jsonl";
    case OutputFormat::csv:
        return "csv";
    case OutputFormat::text:
        return "text";
    }
    return "jsonl";
}

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto &e : errors) {
              msg += "\n  " + e;
          }
          return msg;
      }()),
      errors_(std::move(errors)) {}

namespace {

// Well-formed settings go to the result, malformed lines to `errors`.
std::vector<Setting> split_settings(std::string_view source,
                                    std::vector<std::string> &errors) {
    std::vector<Setting> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const auto eol = source.find('\n', pos);
        std::string_view line = source.substr(
            pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = (eol == std::string_view::npos) ? source.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const std::string text = trim(line);
        if (text.empty()) {
            continue;
        }
        const auto eq = text.find('=');
        const std::string origin = "line " + std::to_string(line_no);
        if (eq == std::string::npos) {
            errors.push_back(origin + ": expected 'key = value', got '" + text + "'");
            continue;
        }
        Setting s{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), origin};
        if (s.key.empty()) {
            errors.push_back(origin + ": missing key before '='");
            continue;
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

std::vector<Setting> parse_settings(std::string_view source) {
    std::vector<std::string> errors;
    std::vector<Setting> out = split_settings(source, errors);
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return out;
}

ExperimentConfig parse_config(std::string_view source,
                              const std::vector<Setting> &overrides,
                              std::optional<std::string> env_seed) {
    std::vector<std::string> syntax_errors;
    std::vector<Setting> all = split_settings(source, syntax_errors);
    all.insert(all.end(), overrides.begin(), overrides.end());

    Validator v;
    for (const auto &e : syntax_errors) {
        v.error(e);
    }

    // Last assignment wins.
    std::map<std::string, Setting> last;
    for (const Setting &s : all) {
        if (!known_keys().contains(s.key)) {
            v.error(s, "unknown key");
            continue;
        }
        last[s.key] = s;
    }

    ExperimentConfig c;
    auto get = [&](const std::string &key) -> const Setting * {
        const auto it = last.find(key);
        return it == last.end() ? nullptr : &it->second;
    };

    const ExperimentSpec *spec = nullptr;
    if (const Setting *s = get("experiment")) {
        c.experiment = s->value;
        spec = find_spec(s->value);
        if (!spec) {
            std::string list;
            for (const auto &name : experiment_names()) {
                list += (list.empty() ? "" : ", ") + name;
            }
            v.error(*s, "unknown experiment '" + s->value + "' (expected one of " +
                            list + ")");
        }
    } else {
        v.error("missing required key 'experiment'");
    }

    if (const Setting *s = get("seed")) {
        if (auto seed = to_seed(s->value)) {
            c.seed = *seed;
            c.seed_given = true;
        } else {
            v.error(*s, "expected an unsigned 64-bit integer");
        }
    } else if (env_seed) {
        if (auto seed = to_seed(*env_seed)) {
            c.seed = *seed;
            c.warnings.push_back(std::string("seed not specified; using ") +
                                 kSeedEnvVar + "=" + *env_seed);
        } else {
            v.error(std::string("environment ") + kSeedEnvVar +
                    ": expected an unsigned 64-bit integer");
        }
    } else {
        c.warnings.push_back("seed not specified; using default seed " +
                             std::to_string(kDefaultSeed));
    }

    auto count = [&](const char *key, std::size_t min_value,
                     std::optional<std::size_t> &dest) {
        if (const Setting *s = get(key)) {
            const auto value = to_count(s->value);
            if (!value) {
                v.error(*s, "expected a non-negative integer");
            } else if (*value < min_value) {
                v.error(*s, "must be at least " + std::to_string(min_value));
            } else {
                dest = *value;
            }
        }
    };
    auto real = [&](const char *key, std::optional<double> &dest,
                    auto in_range, const std::string &range_message) {
        if (const Setting *s = get(key)) {
            const auto value = to_real(s->value);
            if (!value) {
                v.error(*s, "expected a finite real number");
            } else if (!in_range(*value)) {
                v.error(*s, range_message);
            } else {
                dest = *value;
            }
        }
    };
    auto real_list = [&](const char *key, std::vector<double> &dest) {
        if (const Setting *s = get(key)) {
            for (const std::string &item : split(s->value, ',')) {
                if (const auto value = to_real(item)) {
                    dest.push_back(*value);
                } else {
                    v.error(*s, "'" + item + "' is not a real number");
                }
            }
        }
    };

    count("k", 1, c.k);
    count("n", 1, c.n);
    count("trials", 1, c.trials);
    if (const Setting *s = get("ns")) {
        for (const std::string &item : split(s->value, ',')) {
            const auto value = to_count(item);
            if (!value || *value == 0) {
                v.error(*s, "'" + item + "' is not a positive integer");
            } else {
                c.ns.push_back(*value);
            }
        }
        if (c.ns.empty()) {
            v.error(*s, "list is empty");
        }
    }
    const bool eps_may_be_zero = c.experiment == "converge";
    real("eps", c.eps,
         [&](double x) { return eps_may_be_zero ? x >= 0.0 : x > 0.0; },
         eps_may_be_zero ? "eps must be non-negative" : "eps must be positive");
    real("delta", c.delta, [](double x) { return x > 0.0 && x < 1.0; },
         "delta must lie in (0,1)");
    real("R", c.radius, [](double x) { return x > 0.0; }, "R must be positive");
    real("alpha", c.alpha, [](double x) { return x > 0.0 && x < 1.0; },
         "alpha must lie in (0,1)");
    real("beta", c.beta, [](double x) { return x >= 0.0; }, "beta must be >= 0");
    real_list("spectrum", c.spectrum);
    real_list("energies", c.energies);

    if (const Setting *s = get("c")) {
        for (const std::string &item : split(s->value, ',')) {
            const auto colon = item.find(':');
            const auto re = to_real(item.substr(0, colon));
            const auto im = colon == std::string::npos
                                 ? std::optional<double>(0.0)
                                 : to_real(item.substr(colon + 1));
            if (!re || !im) {
                v.error(*s, "'" + item + "' is not 're' or 're:im'");
            } else {
                c.schmidt.emplace_back(*re, *im);
            }
        }
        if (!c.schmidt.empty() && std::abs(norm2(c.schmidt) - 1.0) > 1e-10) {
            v.error(*s, "sum of |c_i|^2 must be 1 (within 1e-10)");
        }
    }
    if (const Setting *s = get("rho")) {
        c.rho_path = s->value;
        if (c.rho_path.empty()) {
            v.error(*s, "empty path");
        }
    }
    if (const Setting *s = get("selections")) {
        for (const std::string &item : split(s->value, ';')) {
            const auto bar = item.find('|');
            if (bar == std::string::npos) {
                v.error(*s, "'" + item + "' is not of the form rows|cols");
                continue;
            }
            Selection sel;
            bool ok = true;
            auto fill = [&](const std::string &part, std::vector<std::size_t> &dest) {
                for (const std::string &x : split(part, ',')) {
                    const auto value = to_count(x);
                    if (!value || *value == 0) {
                        ok = false;
                    } else {
                        dest.push_back(*value - 1);
                    }
                }
            };
            fill(item.substr(0, bar), sel.rows);
            fill(item.substr(bar + 1), sel.cols);
            if (!ok) {
                v.error(*s, "'" + item + "' must list 1-based row and column indices");
            } else {
                c.selections.push_back(std::move(sel));
            }
        }
    }

    if (const Setting *s = get("format")) {
        if (s->value == "jsonl") {
            c.format = OutputFormat::jsonl;
        } else if (s->value == "csv") {
            c.format = OutputFormat::csv;
        } else if (s->value == "text") {
            c.format = OutputFormat::text;
        } else {
            v.error(*s, "expected jsonl, csv or text");
        }
    }
    if (const Setting *s = get("out")) {
        c.out = s->value;
    }
    if (const Setting *s = get("workers")) {
        const auto value = to_count(s->value);
        if (!value || *value == 0 || *value > 1024) {
            v.error(*s, "workers must be an integer in 1..1024");
        } else {
            c.workers = static_cast<unsigned>(*value);
        }
    }
    if (const Setting *s = get("strict")) {
        if (s->value == "true" || s->value == "1") {
            c.strict = true;
        } else if (s->value == "false" || s->value == "0") {
            c.strict = false;
        } else {
            v.error(*s, "expected true or false");
        }
    }

    if (spec) {
        for (const std::string &key : spec->required) {
            if (!get(key)) {
                v.error("missing required key '" + key + "' for experiment " +
                        spec->name);
            }
        }
        for (const auto &[key, setting] : last) {
            const bool used =
                key == "experiment" || key == "seed" || run_option_keys().contains(key) ||
                std::find(spec->required.begin(), spec->required.end(), key) !=
                    spec->required.end() ||
                std::find(spec->optional.begin(), spec->optional.end(), key) !=
                    spec->optional.end();
            if (!used && known_keys().contains(key)) {
                c.warnings.push_back(setting.origin + ": key '" + key +
                                     "' is ignored by experiment " + spec->name);
            }
        }
        if (c.trials && *c.trials < spec->min_trials) {
            v.error(*get("trials"), "experiment " + spec->name +
                                        " needs at least " +
                                        std::to_string(spec->min_trials) + " trials");
        }
        if (c.k && c.n && *c.n < *c.k) {
            v.error(*get("n"), "n must be >= k");
        }
        if (c.k && spec->name != "certificate") {
            for (std::size_t n : c.ns) {
                if (n < *c.k && spec->name == "converge") {
                    v.error(*get("ns"), "every n must be >= k");
                    break;
                }
            }
        }
        if (spec->name == "condwf-check" && c.n && !c.schmidt.empty() &&
            *c.n < c.schmidt.size()) {
            v.error(*get("n"), "n must be at least the number of Schmidt coefficients");
        }
        if (spec->name == "invariance" && c.k && c.n) {
            for (const Selection &sel : c.selections) {
                const auto bad = [&](const std::vector<std::size_t> &idx) {
                    std::set<std::size_t> u(idx.begin(), idx.end());
                    return idx.size() != *c.k || u.size() != idx.size() ||
                           (!u.empty() && *u.rbegin() >= *c.n);
                };
                if (bad(sel.rows) || bad(sel.cols)) {
                    v.error(*get("selections"),
                            "selection " + sel.describe() + " must pick k distinct "
                            "rows and columns in 1..n");
                }
            }
        }
        if (spec->name == "gap-check") {
            const int sources = (get("rho") ? 1 : 0) + (get("spectrum") ? 1 : 0) +
                                (get("energies") ? 1 : 0);
            if (sources != 1) {
                v.error("experiment gap-check needs exactly one of rho, spectrum, "
                        "energies");
            }
            if (get("energies") && !get("beta")) {
                v.error("experiment gap-check: energies requires beta");
            }
            if (!c.spectrum.empty()) {
                try {
                    (void)make_density_matrix(c.spectrum);
                } catch (const std::exception &e) {
                    v.error(*get("spectrum"), e.what());
                }
            }
        }
    }

    if (!v.errors().empty()) {
        throw ConfigError(v.errors());
    }
    return c;
}

std::string render_config(const ExperimentConfig &c) {
    std::ostringstream os;
    auto list = [&](const auto &values, auto fmt) {
        std::string s;
        for (const auto &x : values) {
            s += (s.empty() ? "" : ",") + fmt(x);
        }
        return s;
    };
    auto count_str = [](std::size_t x) { return std::to_string(x); };
    os << "experiment = " << c.experiment << '\n';
    os << "seed = " << c.seed << '\n';
    if (c.k) os << "k = " << *c.k << '\n';
    if (c.n) os << "n = " << *c.n << '\n';
    if (!c.ns.empty()) os << "ns = " << list(c.ns, count_str) << '\n';
    if (c.trials) os << "trials = " << *c.trials << '\n';
    if (c.eps) os << "eps = " << format_real(*c.eps) << '\n';
    if (c.delta) os << "delta = " << format_real(*c.delta) << '\n';
    if (c.radius) os << "R = " << format_real(*c.radius) << '\n';
    if (c.alpha) os << "alpha = " << format_real(*c.alpha) << '\n';
    if (c.beta) os << "beta = " << format_real(*c.beta) << '\n';
    if (!c.spectrum.empty()) os << "spectrum = " << list(c.spectrum, format_real) << '\n';
    if (!c.energies.empty()) os << "energies = " << list(c.energies, format_real) << '\n';
    if (!c.schmidt.empty()) {
        os << "c = "
           << list(c.schmidt,
                   [](const Complex &z) {
                       return format_real(z.real()) + ":" + format_real(z.imag());
                   })
           << '\n';
    }
    if (!c.rho_path.empty()) os << "rho = " << c.rho_path << '\n';
    if (!c.selections.empty()) {
        std::string s;
        for (const Selection &sel : c.selections) {
            auto one = [](std::size_t x) { return std::to_string(x + 1); };
            s += (s.empty() ? "" : "; ") + list(sel.rows, one) + "|" + list(sel.cols, one);
        }
        os << "selections = " << s << '\n';
    }
    return os.str();
}

} // namespace haarlab::cli
