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

#include "haarlab/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <new>
#include <numeric>

#include "haarlab/dist_tests.hpp"
#include "haarlab/gap_measures.hpp"
#include "haarlab/haar_sampler.hpp"
#include "haarlab/limit_analysis.hpp"
#include "haarlab/matrix_io.hpp"
#include "haarlab/parallel.hpp"
#include "haarlab/random_stream.hpp"

namespace haarlab::cli {

namespace {

constexpr double kDefaultAlpha = 0.01;
constexpr double kUnitarityTolerance = 1e-10;
constexpr double kCondwfCovarianceTolerance = 0.02;

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string utc_timestamp() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json to_json(const TestReport &r) {
    return Json{{"description", r.description},
                {"statistic", r.statistic},
                {"threshold", r.threshold},
                {"pass", r.pass},
                {"n_samples", r.n_samples}};
}

Json tests_json(const std::vector<TestReport> &reports, bool &all_pass) {
    Json out = Json::array();
    for (const TestReport &r : reports) {
        all_pass = all_pass && r.pass;
        out.push_back(to_json(r));
    }
    return out;
}

Json to_json(const RateEstimate &e) {
    return Json{{"name", e.name},         {"hits", e.hits},
                {"trials", e.trials},     {"rate", e.rate},
                {"mc_sigma", e.mc_sigma}, {"bound", e.bound},
                {"pass", e.pass}};
}

std::vector<Selection> default_selections(std::size_t n, std::size_t k) {
    Selection upper;
    Selection lower;
    for (std::size_t i = 0; i < k; ++i) {
        upper.rows.push_back(i);
        upper.cols.push_back(i);
        lower.rows.push_back(n - k + i);
        lower.cols.push_back(n - k + i);
    }
    return {upper, lower};
}

void note(const ProgressFn &progress, const std::string &message) {
    if (progress) {
        progress(message);
    }
}

Json run_converge(const ExperimentConfig &c, const RandomStream &master,
                  const ProgressFn &progress) {
    note(progress, "converge: " + std::to_string(c.ns.size()) + " sizes x " +
                       std::to_string(*c.trials) + " trials");
    const ConvergenceCurve curve = estimate_coupling_probability(
        master, *c.k, *c.eps, c.ns, *c.trials, c.workers);
    Json points = Json::array();
    for (const ConvergencePoint &p : curve.points) {
        points.push_back(Json{{"n", p.n},
                              {"trials", p.trials},
                              {"successes", p.successes},
                              {"rank_deficient", p.rank_deficient},
                              {"p_hat", p.p_hat},
                              {"ci_low", p.ci_low},
                              {"ci_high", p.ci_high}});
    }
    const bool monotone = is_monotone_up_to_overlap(curve);
    const bool separated = endpoints_separated(curve);
    return Json{{"k", curve.k},
                {"eps", curve.eps},
                {"points", points},
                {"monotone_up_to_overlap", monotone},
                {"endpoints_separated", separated},
                {"pass", monotone && separated}};
}

Json run_events(const ExperimentConfig &c, const RandomStream &master,
                const ProgressFn &progress) {
    EventParams params = EventParams::standard(*c.n, *c.k, *c.delta);
    if (c.radius) {
        params.radius = *c.radius;
    }
    note(progress, "events: n=" + std::to_string(params.n) + ", " +
                       std::to_string(*c.trials) + " trials");
    const EventRates rates =
        estimate_event_rates(master, params, *c.trials, c.workers);
    bool pass = true;
    Json estimates = Json::array();
    for (const RateEstimate &e : rates.estimates) {
        pass = pass && e.pass;
        estimates.push_back(to_json(e));
    }
    Json sharper = Json::array();
    for (const RateEstimate &e : rates.sharper_b) {
        sharper.push_back(to_json(e));
    }
    return Json{{"n", params.n},         {"k", params.k},
                {"delta", params.delta}, {"R", params.radius},
                {"trials", rates.trials}, {"estimates", estimates},
                {"sharper_b", sharper},  {"pass", pass}};
}

Json run_certificate(const ExperimentConfig &c, const RandomStream &master,
                     const ProgressFn &progress) {
    const ConstantLedger ledger =
        c.radius ? build_constant_ledger(*c.k, *c.delta, *c.eps, *c.radius)
                 : build_constant_ledger(*c.k, *c.delta, *c.eps);
    const std::size_t n = c.n.value_or(ledger.n0);
    note(progress, "certificate: n0=" + std::to_string(ledger.n0) + ", n=" +
                       std::to_string(n) + ", " + std::to_string(*c.trials) +
                       " trials");

    Json conditions = Json::array();
    for (const ThresholdCondition &t : ledger.conditions) {
        conditions.push_back(
            Json{{"name", t.name}, {"bound", t.bound}, {"min_n", t.min_n}});
    }
    Json ledger_json{{"k", ledger.k},
                     {"delta", ledger.delta},
                     {"eps", ledger.eps},
                     {"R", ledger.radius},
                     {"C", ledger.c},
                     {"C_prime", ledger.c_prime},
                     {"C_double_prime", ledger.c_double_prime},
                     {"C_triple_prime", ledger.c_triple_prime},
                     {"C_tilde", ledger.c_tilde},
                     {"conditions", conditions},
                     {"n0", ledger.n0}};

    const CertificateRun run =
        run_certificate_trials(master, ledger, n, *c.trials, c.workers);
    Json reports = Json::array();
    for (const CertificateReport &r : run.reports) {
        Json checks = Json::array();
        for (const CertificateCheck &ch : r.checks) {
            checks.push_back(Json{{"name", ch.name},
                                  {"lhs", ch.lhs},
                                  {"rhs", ch.rhs},
                                  {"pass", ch.pass}});
        }
        reports.push_back(Json{{"trial", r.trial},
                               {"in_d", r.in_d},
                               {"first_failure", r.first_failure
                                                     ? Json(*r.first_failure)
                                                     : Json(nullptr)},
                               {"checks", checks}});
    }
    return Json{{"ledger", ledger_json},
                {"n0", ledger.n0},
                {"n", run.n},
                {"below_threshold", run.n < ledger.n0},
                {"trials", run.trials},
                {"in_d", run.in_d},
                {"rank_deficient", run.rank_deficient},
                {"ia2_violations_in_d", run.ia2_violations_in_d},
                {"failures_in_d", run.failures_in_d},
                {"reports", reports},
                {"pass", run.ia2_violations_in_d == 0 && run.failures_in_d == 0}};
}

Json run_gaussianity(const ExperimentConfig &c, const RandomStream &master,
                     const ProgressFn &progress) {
    const double alpha = c.alpha.value_or(kDefaultAlpha);
    note(progress, "gaussianity: n=" + std::to_string(*c.n) + ", " +
                       std::to_string(*c.trials) + " trials");
    const auto reports =
        entrywise_gaussianity(master, *c.n, *c.k, *c.trials, alpha, c.workers);
    bool pass = true;
    Json tests = tests_json(reports, pass);
    return Json{{"n", *c.n},      {"k", *c.k},     {"trials", *c.trials},
                {"alpha", alpha}, {"tests", tests}, {"pass", pass}};
}

Json run_independence(const ExperimentConfig &c, const RandomStream &master,
                      const ProgressFn &progress) {
    note(progress, "independence: n=" + std::to_string(*c.n) + ", " +
                       std::to_string(*c.trials) + " trials");
    const auto reports =
        independence_check(master, *c.n, *c.k, *c.trials, c.workers);
    bool pass = true;
    Json tests = tests_json(reports, pass);
    return Json{{"n", *c.n},
                {"k", *c.k},
                {"trials", *c.trials},
                {"tests", tests},
                {"pass", pass}};
}

Json run_invariance(const ExperimentConfig &c, const RandomStream &master,
                    const ProgressFn &progress) {
    const std::vector<Selection> selections =
        c.selections.empty() ? default_selections(*c.n, *c.k) : c.selections;
    note(progress, "invariance: n=" + std::to_string(*c.n) + ", " +
                       std::to_string(selections.size()) + " selections");
    const auto reports =
        submatrix_invariance(derive_stream(master, 1), *c.n, *c.k, selections,
                             *c.trials, c.workers);
    bool pass = true;
    Json tests = tests_json(reports, pass);
    Json described = Json::array();
    for (const Selection &s : selections) {
        described.push_back(s.describe());
    }
    note(progress, "invariance: adversarial selection demo");
    const AdversarialDemo demo = adversarial_selection_demo(
        derive_stream(master, 2), *c.n, *c.k, *c.trials, c.workers);
    return Json{{"n", *c.n},
                {"k", *c.k},
                {"trials", *c.trials},
                {"selections", described},
                {"tests", tests},
                {"adversarial",
                 Json{{"mean_scaled_abs2", demo.mean_scaled_abs2},
                      {"baseline", demo.baseline},
                      {"standard_error", demo.standard_error},
                      {"z_score", demo.z_score}}},
                {"pass", pass}};
}

DensityMatrix load_rho(const ExperimentConfig &c) {
    if (!c.rho_path.empty()) {
        std::ifstream in(c.rho_path);
        if (!in) {
            throw InputError("cannot open density matrix '" + c.rho_path + "'");
        }
        try {
            return read_density_matrix(in);
        } catch (const std::exception &e) {
            throw InputError("'" + c.rho_path + "': " + e.what());
        }
    }
    if (!c.energies.empty()) {
        return gibbs_density_matrix(c.energies, *c.beta);
    }
    return make_density_matrix(c.spectrum);
}

Json rho_json(const DensityMatrix &rho) {
    return Json{{"dim", rho.dim()},
                {"eigenvalues", rho.eigenvalues()},
                {"purity", rho.purity()}};
}

Json run_gap_check(const ExperimentConfig &c, const RandomStream &master,
                   const ProgressFn &progress) {
    const DensityMatrix rho = load_rho(c);
    const double alpha = c.alpha.value_or(kDefaultAlpha);
    note(progress, "gap-check: k=" + std::to_string(rho.dim()) + ", " +
                       std::to_string(*c.trials) + " samples");
    const auto reports =
        gap_chain_checks(rho, master, *c.trials, alpha, c.workers);
    bool pass = true;
    Json tests = tests_json(reports, pass);
    return Json{{"rho", rho_json(rho)},
                {"samples", *c.trials},
                {"alpha", alpha},
                {"tests", tests},
                {"pass", pass}};
}

Json run_condwf_check(const ExperimentConfig &c, const RandomStream &master,
                      const ProgressFn &progress) {
    const double alpha = c.alpha.value_or(kDefaultAlpha);
    std::vector<double> weights;
    for (const Complex &z : c.schmidt) {
        weights.push_back(std::norm(z));
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double &w : weights) {
        w /= total;
    }
    const DensityMatrix rho = make_density_matrix(weights);
    note(progress, "condwf-check: n=" + std::to_string(*c.n) + ", " +
                       std::to_string(*c.trials) + " samples");
    const auto samples = sample_conditional_batch(
        c.schmidt, *c.n, derive_stream(master, 1), *c.trials, c.workers);
    note(progress, "condwf-check: comparing against GAP draws");
    auto reports = compare_to_gap(samples, rho, derive_stream(master, 2),
                                  alpha, c.workers);

    const ComplexMatrix cov = empirical_covariance(samples);
    double worst = 0.0;
    for (std::size_t i = 0; i < cov.rows(); ++i) {
        for (std::size_t j = 0; j < cov.cols(); ++j) {
            worst = std::max(worst, std::abs(cov(i, j) - rho.matrix()(i, j)));
        }
    }
    reports.push_back(TestReport{"max entry |E psi psi^+ - rho|", worst,
                                 kCondwfCovarianceTolerance,
                                 worst < kCondwfCovarianceTolerance,
                                 samples.size()});
    bool pass = true;
    Json tests = tests_json(reports, pass);
    return Json{{"n", *c.n},
                {"rho", rho_json(rho)},
                {"samples", *c.trials},
                {"alpha", alpha},
                {"tests", tests},
                {"pass", pass}};
}

Json run_sphere(const ExperimentConfig &c, const RandomStream &master,
                const ProgressFn &progress) {
    const std::size_t n = *c.n;
    const std::size_t k = *c.k;
    const std::size_t trials = *c.trials;
    const double alpha = c.alpha.value_or(kDefaultAlpha);
    note(progress, "sphere: n=" + std::to_string(n) + ", " +
                       std::to_string(trials) + " draws");
    std::vector<std::vector<Complex>> draws(trials);
    parallel_for(trials, c.workers, [&](std::size_t t) {
        RandomStream s = derive_stream(master, t);
        draws[t] = sample_sphere_marginal(s, n, k);
    });
    std::vector<TestReport> reports;
    std::vector<double> re(trials);
    std::vector<double> im(trials);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t t = 0; t < trials; ++t) {
            re[t] = draws[t][i].real();
            im[t] = draws[t][i].imag();
        }
        const std::string coord = "sqrt(n)x_" + std::to_string(i + 1);
        TestReport r = ks_statistic(re, ReferenceCdf::normal_half, alpha);
        r.description = "KS Re " + coord + " vs normal(0,1/2)";
        reports.push_back(r);
        r = ks_statistic(im, ReferenceCdf::normal_half, alpha);
        r.description = "KS Im " + coord + " vs normal(0,1/2)";
        reports.push_back(r);
    }
    bool pass = true;
    Json tests = tests_json(reports, pass);
    return Json{{"n", n},         {"k", k},         {"trials", trials},
                {"alpha", alpha}, {"tests", tests}, {"pass", pass}};
}

struct UnitarityTrial {
    double orthonormality = 0.0;
    double triangularity = 0.0;
    bool rank_deficient = false;
};

// G = U T with T upper triangular and a positive real diagonal, so
// <U_l, G_j> vanishes for l > j and <U_j, G_j> is real and positive.
double triangularity_error(const CoupledSample &s) {
    double worst = 0.0;
    for (std::size_t j = 0; j < s.k; ++j) {
        const double scale = std::sqrt(column_norm2(s.gaussian, j));
        const Complex diag = column_inner(s.unitary, j, s.gaussian, j);
        if (!(diag.real() > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        worst = std::max(worst, std::abs(diag.imag()) / scale);
        for (std::size_t l = j + 1; l < s.k; ++l) {
            worst = std::max(
                worst, std::abs(column_inner(s.unitary, l, s.gaussian, j)) / scale);
        }
    }
    return worst;
}

Json run_unitarity(const ExperimentConfig &c, const RandomStream &master,
                   const ProgressFn &progress) {
    Json rows = Json::array();
    bool pass = true;
    for (const std::size_t n : c.ns) {
        const std::size_t k = std::min(n, *c.k);
        note(progress, "unitarity: n=" + std::to_string(n) + ", k=" +
                           std::to_string(k));
        const RandomStream at_n = derive_stream(master, n);
        std::vector<UnitarityTrial> slots(*c.trials);
        parallel_for(*c.trials, c.workers, [&](std::size_t t) {
            RandomStream s = derive_stream(at_n, t);
            try {
                const CoupledSample sample = sample_coupled(s, n, k);
                slots[t].orthonormality = orthonormality_error(sample.unitary);
                slots[t].triangularity = triangularity_error(sample);
            } catch (const RankDeficient &) {
                slots[t].rank_deficient = true;
            }
        });
        UnitarityTrial worst;
        std::size_t deficient = 0;
        for (const UnitarityTrial &u : slots) {
            worst.orthonormality = std::max(worst.orthonormality, u.orthonormality);
            worst.triangularity = std::max(worst.triangularity, u.triangularity);
            deficient += u.rank_deficient ? 1 : 0;
        }
        const bool ok = deficient == 0 &&
                        worst.orthonormality <= kUnitarityTolerance &&
                        worst.triangularity <= kUnitarityTolerance;
        pass = pass && ok;
        rows.push_back(Json{{"n", n},
                            {"k", k},
                            {"trials", *c.trials},
                            {"max_orthonormality_error", worst.orthonormality},
                            {"max_triangularity_error", worst.triangularity},
                            {"rank_deficient", deficient},
                            {"tolerance", kUnitarityTolerance},
                            {"pass", ok}});
    }
    return Json{{"k", *c.k}, {"sizes", rows}, {"pass", pass}};
}

Json dispatch(const ExperimentConfig &c, const RandomStream &master,
              const ProgressFn &progress) {
    const std::string &e = c.experiment;
    if (e == "converge") return run_converge(c, master, progress);
    if (e == "events") return run_events(c, master, progress);
    if (e == "certificate") return run_certificate(c, master, progress);
    if (e == "gaussianity") return run_gaussianity(c, master, progress);
    if (e == "independence") return run_independence(c, master, progress);
    if (e == "invariance") return run_invariance(c, master, progress);
    if (e == "gap-check") return run_gap_check(c, master, progress);
    if (e == "condwf-check") return run_condwf_check(c, master, progress);
    if (e == "sphere") return run_sphere(c, master, progress);
    if (e == "unitarity") return run_unitarity(c, master, progress);
    throw std::invalid_argument("unknown experiment '" + e + "'");
}

Json error_payload(const char *type, const std::string &message) {
    return Json{{"error", Json{{"type", type}, {"message", message}}},
                {"pass", false}};
}

std::string param_text(const std::string &key, const Json &v) {
    if (key == "c") {
        std::string s;
        for (const Json &z : v) {
            s += (s.empty() ? "" : ",") + format_real(z[0].get<double>()) + ":" +
                 format_real(z[1].get<double>());
        }
        return s;
    }
    if (key == "selections") {
        std::string s;
        for (const Json &sel : v) {
            std::string rows;
            std::string cols;
            for (const Json &r : sel["rows"]) {
                rows += (rows.empty() ? "" : ",") + std::to_string(r.get<std::size_t>());
            }
            for (const Json &r : sel["cols"]) {
                cols += (cols.empty() ? "" : ",") + std::to_string(r.get<std::size_t>());
            }
            s += (s.empty() ? "" : "; ") + rows + "|" + cols;
        }
        return s;
    }
    if (v.is_array()) {
        std::string s;
        for (const Json &x : v) {
            s += (s.empty() ? "" : ",") + param_text(key, x);
        }
        return s;
    }
    if (v.is_number_unsigned() || v.is_number_integer()) {
        return v.dump();
    }
    if (v.is_number_float()) {
        return format_real(v.get<double>());
    }
    return v.get<std::string>();
}

} // namespace

bool ResultRecord::pass() const {
    return payload.is_object() && payload.contains("pass") &&
           payload["pass"].is_boolean() && payload["pass"].get<bool>() &&
           !payload.contains("error");
}

Json params_json(const ExperimentConfig &c) {
    Json p = Json::object();
    if (c.k) p["k"] = *c.k;
    if (c.n) p["n"] = *c.n;
    if (!c.ns.empty()) p["ns"] = c.ns;
    if (c.trials) p["trials"] = *c.trials;
    if (c.eps) p["eps"] = *c.eps;
    if (c.delta) p["delta"] = *c.delta;
    if (c.radius) p["R"] = *c.radius;
    if (c.alpha) p["alpha"] = *c.alpha;
    if (c.beta) p["beta"] = *c.beta;
    if (!c.spectrum.empty()) p["spectrum"] = c.spectrum;
    if (!c.energies.empty()) p["energies"] = c.energies;
    if (!c.schmidt.empty()) {
        Json cs = Json::array();
        for (const Complex &z : c.schmidt) {
            cs.push_back(Json::array({z.real(), z.imag()}));
        }
        p["c"] = cs;
    }
    if (!c.rho_path.empty()) p["rho"] = c.rho_path;
    if (!c.selections.empty()) {
        Json sels = Json::array();
        for (const Selection &s : c.selections) {
            Json rows = Json::array();
            Json cols = Json::array();
            for (std::size_t r : s.rows) rows.push_back(r + 1);
            for (std::size_t q : s.cols) cols.push_back(q + 1);
            sels.push_back(Json{{"rows", rows}, {"cols", cols}});
        }
        p["selections"] = sels;
    }
    return p;
}

ExperimentConfig config_from_record(const ResultRecord &record) {
    std::vector<Setting> settings;
    settings.push_back({"experiment", record.experiment, "record"});
    settings.push_back({"seed", std::to_string(record.seed), "record"});
    for (const auto &[key, value] : record.params.items()) {
        settings.push_back({key, param_text(key, value), "record"});
    }
    return parse_config("", settings);
}

ResultRecord run_experiment(const ExperimentConfig &config,
                            const ProgressFn &progress) {
    ResultRecord record;
    record.experiment = config.experiment;
    record.seed = config.seed;
    record.params = params_json(config);
    record.warnings = config.warnings;
    record.timestamp = utc_timestamp();

    const auto start = std::chrono::steady_clock::now();
    const RandomStream master(config.seed);
    try {
        record.payload = dispatch(config, master, progress);
    } catch (const InputError &) {
        throw;
    } catch (const std::bad_alloc &) {
        throw;
    } catch (const RankDeficient &e) {
        record.payload = error_payload("RankDeficient", e.what());
    } catch (const DegenerateSample &e) {
        record.payload = error_payload("DegenerateSample", e.what());
    } catch (const InvalidDensityMatrix &e) {
        record.payload = error_payload("InvalidDensityMatrix", e.what());
    } catch (const DimensionMismatch &e) {
        record.payload = error_payload("DimensionMismatch", e.what());
    } catch (const std::exception &e) {
        record.payload = error_payload("Error", e.what());
    }
    record.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return record;
}

} // namespace haarlab::cli
