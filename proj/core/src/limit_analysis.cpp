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

#include "haarlab/limit_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "haarlab/parallel.hpp"

namespace haarlab {

namespace {

std::string idx(std::size_t j) { return std::to_string(j + 1); }

// Smallest integer strictly greater than x (x >= 0).
std::size_t first_integer_above(double x) {
    if (!(x >= 0.0)) {
        return 0;
    }
    return static_cast<std::size_t>(std::floor(x)) + 1;
}

double binomial_sigma(double p, std::size_t trials) {
    const double q = std::clamp(p, 0.0, 1.0);
    return std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

void validate_ledger_params(std::size_t k, double delta, double eps) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error("delta must lie in (0,1)");
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::domain_error("eps must be positive and finite");
    }
    if (k == 0) {
        throw std::domain_error("k must be at least 1");
    }
}

} // namespace

double radius_for_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error("radius_for_delta: delta must lie in (0,1)");
    }
    return std::sqrt(-std::log(delta));
}

EventParams EventParams::standard(std::size_t n, std::size_t k, double delta) {
    return EventParams{n, k, delta, radius_for_delta(delta)};
}

EventReport evaluate_events(const ComplexMatrix &g, const EventParams &params) {
    const std::size_t n = params.n;
    const std::size_t k = params.k;
    if (g.rows() != n || g.cols() != k || k == 0 || k > n) {
        throw DimensionMismatch("evaluate_events: expected an n x k panel with "
                                "n >= k");
    }
    const double nd = static_cast<double>(n);
    EventReport r;
    r.a_threshold = std::sqrt(nd / params.delta);
    r.b_threshold = std::sqrt(2.0 / (nd * params.delta));
    r.c_threshold = params.radius;
    bool all = true;

    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = 0; l < k; ++l) {
            if (j == l) {
                continue;
            }
            const double v = std::abs(column_inner(g, j, g, l));
            const bool ok = v < r.a_threshold;
            r.a_pairs.push_back({j, l, v, ok});
            all = all && ok;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        const double v = std::abs(column_norm2(g, j) / nd - 1.0);
        const bool ok = v < r.b_threshold;
        r.b_values.push_back(v);
        r.b_cols.push_back(ok);
        all = all && ok;
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double v = std::abs(g(i, j));
            const bool ok = v < r.c_threshold;
            r.c_values.push_back(v);
            r.c_entries.push_back(ok);
            all = all && ok;
        }
    }
    r.d_all = all;
    return r;
}

double coupling_distance(const CoupledSample &sample) {
    const double sn = std::sqrt(static_cast<double>(sample.n));
    double s = 0.0;
    for (std::size_t i = 0; i < sample.k; ++i) {
        for (std::size_t j = 0; j < sample.k; ++j) {
            s += std::abs(sn * sample.unitary(i, j) - sample.gaussian(i, j));
        }
    }
    return s;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval: no trials");
    }
    const double nt = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double center = (p + z2 / (2.0 * nt)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
    // The closed form gives exactly 0 and 1 at the extremes; rounding does not.
    const double low = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double high = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {low, high};
}

ConvergenceCurve estimate_coupling_probability(
    const RandomStream &stream, std::size_t k, double eps,
    const std::vector<std::size_t> &ns, std::size_t trials, unsigned workers) {
    if (trials < 100) {
        throw std::invalid_argument(
            "estimate_coupling_probability: trials must be at least 100");
    }
    if (!(eps >= 0.0)) {
        throw std::invalid_argument(
            "estimate_coupling_probability: eps must be non-negative");
    }
    if (k == 0) {
        throw std::invalid_argument("estimate_coupling_probability: k >= 1");
    }
    for (std::size_t n : ns) {
        if (n < k) {
            throw std::invalid_argument(
                "estimate_coupling_probability: every n must be >= k");
        }
    }

    ConvergenceCurve curve;
    curve.k = k;
    curve.eps = eps;
    // 0 = failure, 1 = success, 2 = rank deficient
    std::vector<unsigned char> outcome(trials);
    for (std::size_t n : ns) {
        const RandomStream node = derive_stream(stream, n);
        parallel_for(trials, workers, [&](std::size_t t) {
            RandomStream s = derive_stream(node, t);
            try {
                const CoupledSample cs = sample_coupled(s, n, k);
                outcome[t] = coupling_distance(cs) < eps ? 1 : 0;
            } catch (const RankDeficient &) {
                outcome[t] = 2;
            }
        });
        ConvergencePoint pt;
        pt.n = n;
        pt.trials = trials;
        pt.successes = static_cast<std::size_t>(
            std::count(outcome.begin(), outcome.end(), 1));
        pt.rank_deficient = static_cast<std::size_t>(
            std::count(outcome.begin(), outcome.end(), 2));
        pt.p_hat = static_cast<double>(pt.successes) /
                   static_cast<double>(trials);
        const Interval ci = wilson_interval(pt.successes, trials);
        pt.ci_low = ci.low;
        pt.ci_high = ci.high;
        curve.points.push_back(pt);
    }
    return curve;
}

bool is_monotone_up_to_overlap(const ConvergenceCurve &curve) {
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const ConvergencePoint &a = curve.points[i - 1];
        const ConvergencePoint &b = curve.points[i];
        const bool overlap = b.ci_high >= a.ci_low && a.ci_high >= b.ci_low;
        if (b.p_hat < a.p_hat && !overlap) {
            return false;
        }
    }
    return true;
}

bool endpoints_separated(const ConvergenceCurve &curve) {
    if (curve.points.size() < 2) {
        return false;
    }
    return curve.points.back().ci_low > curve.points.front().ci_high;
}

EventRates estimate_event_rates(const RandomStream &stream,
                                const EventParams &params, std::size_t trials,
                                unsigned workers) {
    if (trials == 0) {
        throw std::invalid_argument("estimate_event_rates: trials must be > 0");
    }
    if (!(params.delta > 0.0 && params.delta < 1.0)) {
        throw std::domain_error("estimate_event_rates: delta must lie in (0,1)");
    }
    const std::size_t k = params.k;
    std::vector<EventReport> reports(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        RandomStream s = derive_stream(stream, t);
        const ComplexMatrix g = sample_gaussian_matrix(s, params.n, k);
        EventReport r = evaluate_events(g, params);
        r.b_values.clear();
        r.c_values.clear();
        reports[t] = std::move(r);
    });

    const double delta = params.delta;
    const double kd = static_cast<double>(k);
    EventRates out;
    out.params = params;
    out.trials = trials;

    auto make = [&](std::string name, std::size_t hits, double reference) {
        RateEstimate e;
        e.name = std::move(name);
        e.hits = hits;
        e.trials = trials;
        e.rate = static_cast<double>(hits) / static_cast<double>(trials);
        e.bound = reference;
        e.mc_sigma = binomial_sigma(reference, trials);
        e.pass = e.rate >= reference - 5.0 * e.mc_sigma;
        return e;
    };

    // A: the report lists ordered pairs (j, l), j != l, row by row.
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t l = j + 1; l < k; ++l) {
            std::size_t hits = 0;
            for (const EventReport &r : reports) {
                for (const EventReport::Pair &p : r.a_pairs) {
                    if (p.j == j && p.l == l && p.holds) {
                        ++hits;
                    }
                }
            }
            out.estimates.push_back(
                make("A[" + idx(j) + "," + idx(l) + "]", hits, 1.0 - delta));
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t hits = 0;
        for (const EventReport &r : reports) {
            hits += r.b_cols[j] ? 1 : 0;
        }
        out.estimates.push_back(make("B[" + idx(j) + "]", hits, 1.0 - delta));
        out.sharper_b.push_back(
            make("B[" + idx(j) + "]", hits, 1.0 - delta / 2.0));
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t hits = 0;
            for (const EventReport &r : reports) {
                hits += r.c_entries[i * k + j] ? 1 : 0;
            }
            RateEstimate e = make("C[" + idx(i) + "," + idx(j) + "]", hits,
                                  1.0 - delta);
            e.pass = std::abs(e.rate - e.bound) < 5.0 * e.mc_sigma;
            out.estimates.push_back(e);
        }
    }
    std::size_t d_hits = 0;
    for (const EventReport &r : reports) {
        d_hits += r.d_all ? 1 : 0;
    }
    out.estimates.push_back(
        make("D", d_hits, std::max(0.0, 1.0 - 2.0 * kd * kd * delta)));
    return out;
}

double ConstantLedger::triple_prime(std::size_t j) const {
    if (j < 1 || j > k) {
        throw std::out_of_range("triple_prime: column out of range");
    }
    return j == 1 ? 0.0 : c_triple_prime[j - 2];
}

ConstantLedger build_constant_ledger(std::size_t k, double delta, double eps) {
    validate_ledger_params(k, delta, eps);
    return build_constant_ledger(k, delta, eps, radius_for_delta(delta));
}

ConstantLedger build_constant_ledger(std::size_t k, double delta, double eps,
                                     double radius) {
    validate_ledger_params(k, delta, eps);
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::domain_error("R must be positive and finite");
    }
    ConstantLedger L;
    L.k = k;
    L.delta = delta;
    L.eps = eps;
    L.radius = radius;
    const double sd = std::sqrt(delta);
    const double kk = static_cast<double>(k * k);

    L.c.push_back(4.0 / sd);
    L.c_prime.push_back(2.0 * L.c[0] + 1.0 / sd);
    L.c_tilde.push_back(2.0 * std::sqrt(2.0 / delta));
    for (std::size_t j = 2; j <= k; ++j) {
        double sum_p = 0.0;
        double sum_p2 = 0.0;
        for (std::size_t l = 1; l < j; ++l) {
            sum_p += L.c_prime[l - 1];
            sum_p2 += L.c_prime[l - 1] * L.c_prime[l - 1];
        }
        const double cpp = sum_p * (eps / kk + radius);
        const double cppp = sum_p2;
        const double ct = 2.0 * std::sqrt(2.0 / delta) + 2.0 * std::sqrt(cppp);
        const double cj = 2.0 * ct + 2.0 * std::sqrt(cppp);
        L.c_double_prime.push_back(cpp);
        L.c_triple_prime.push_back(cppp);
        L.c_tilde.push_back(ct);
        L.c.push_back(cj);
        L.c_prime.push_back(2.0 * cj + 1.0 / sd);
    }
    L.conditions = threshold_conditions(L);
    L.n0 = sufficiency_threshold(L);
    return L;
}

std::vector<ThresholdCondition>
threshold_conditions(const ConstantLedger &L) {
    const double kk = static_cast<double>(L.k * L.k);
    const double target = L.eps / kk;
    const double s2d = std::sqrt(2.0 / L.delta);
    std::vector<ThresholdCondition> out;
    auto add = [&](std::string name, double bound) {
        out.push_back({std::move(name), bound, first_integer_above(bound)});
    };

    // n >= k, phrased as n > k - 1.
    add("dimension", static_cast<double>(L.k) - 1.0);
    {
        const double root = 2.0 * L.radius / (std::sqrt(L.delta) * target);
        add("base-IA2[j=1]", root * root);
    }
    for (std::size_t j = 1; j <= L.k; ++j) {
        const double root = 2.0 * (s2d + std::sqrt(L.triple_prime(j)));
        add("small-x[j=" + std::to_string(j) + "]", root * root);
        if (j == 1) {
            continue;
        }
        const double ct = L.c_tilde[j - 1];
        add("ratio[j=" + std::to_string(j) + "]", ct * ct);
        const double root2 =
            (ct * L.radius + 2.0 * L.c_double_prime[j - 2]) / target;
        add("IA2[j=" + std::to_string(j) + "]", root2 * root2);
    }
    return out;
}

std::size_t sufficiency_threshold(const ConstantLedger &ledger) {
    std::size_t n0 = 1;
    for (const ThresholdCondition &c : threshold_conditions(ledger)) {
        n0 = std::max(n0, c.min_n);
    }
    return n0;
}

std::size_t CertificateReport::ia2_violations() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const auto &c) {
            return !c.pass && c.name.rfind("IA2", 0) == 0;
        }));
}

CertificateReport verify_certificate(const ComplexMatrix &g,
                                     const ConstantLedger &L) {
    const std::size_t k = L.k;
    const std::size_t n = g.rows();
    if (g.cols() != k || n < k) {
        throw DimensionMismatch("verify_certificate: expected an n x k panel "
                                "with k = ledger.k and n >= k");
    }
    const double nd = static_cast<double>(n);
    const double sn = std::sqrt(nd);
    const double target = L.eps / static_cast<double>(k * k);

    CertificateReport rep;
    rep.n = n;
    rep.below_threshold = n < L.n0;
    rep.in_d = evaluate_events(g, EventParams{n, k, L.delta, L.radius}).d_all;

    const ComplexMatrix u = gram_schmidt_columns(g, k);
    auto check = [&](std::string name, double lhs, double rhs) {
        const bool pass = lhs < rhs;
        if (!pass && !rep.first_failure) {
            rep.first_failure = name;
        }
        rep.checks.push_back({std::move(name), lhs, rhs, pass});
    };

    auto scaled_gap = [&](std::size_t i, std::size_t j) {
        return std::abs(sn * u(i, j) - g(i, j));
    };
    auto column_gap = [&](std::size_t j) {
        std::vector<Complex> d(n);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = sn * u(i, j) - g(i, j);
        }
        return std::sqrt(norm2(d));
    };

    {
        const double ratio = std::abs(sn / std::sqrt(column_norm2(g, 0)) - 1.0);
        check("est4[j=1]", ratio, 2.0 / std::sqrt(L.delta * nd));
        for (std::size_t i = 0; i < k; ++i) {
            check("IA2[i=" + idx(i) + ",j=1]", scaled_gap(i, 0), target);
        }
        check("IA1[j=1]", column_gap(0), L.c[0]);
    }

    std::vector<Complex> delta_j(n);
    for (std::size_t j = 1; j < k; ++j) {
        const std::string jn = idx(j);
        for (std::size_t l = 0; l < j; ++l) {
            const double lhs = sn * std::abs(column_inner(g, j, u, l));
            check("est1[j=" + jn + ",l=" + idx(l) + "]", lhs,
                  L.c_prime[l] * sn);
        }

        std::fill(delta_j.begin(), delta_j.end(), Complex{});
        for (std::size_t l = 0; l < j; ++l) {
            const Complex coef = column_inner(u, l, g, j);
            for (std::size_t i = 0; i < n; ++i) {
                delta_j[i] += coef * u(i, l);
            }
        }
        for (std::size_t i = 0; i < k; ++i) {
            check("est2[i=" + idx(i) + ",j=" + jn + "]", std::abs(delta_j[i]),
                  L.c_double_prime[j - 1] / sn);
        }
        check("est3[j=" + jn + "]", norm2(delta_j),
              L.c_triple_prime[j - 1]);

        std::vector<Complex> residual(n);
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = g(i, j) - delta_j[i];
        }
        const double ratio = std::abs(sn / std::sqrt(norm2(residual)) - 1.0);
        check("est4[j=" + jn + "]", ratio, L.c_tilde[j] / sn);

        for (std::size_t i = 0; i < k; ++i) {
            check("IA2[i=" + idx(i) + ",j=" + jn + "]", scaled_gap(i, j),
                  target);
        }
        check("IA1[j=" + jn + "]", column_gap(j), L.c[j]);
    }

    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            s += scaled_gap(i, j);
        }
    }
    check("E", s, L.eps);
    return rep;
}

CertificateRun run_certificate_trials(const RandomStream &stream,
                                      const ConstantLedger &ledger,
                                      std::size_t n, std::size_t trials,
                                      unsigned workers) {
    if (n < ledger.k) {
        throw std::invalid_argument("run_certificate_trials: n must be >= k");
    }
    std::vector<std::optional<CertificateReport>> slots(trials);
    parallel_for(trials, workers, [&](std::size_t t) {
        RandomStream s = derive_stream(stream, t);
        const ComplexMatrix g = sample_gaussian_matrix(s, n, ledger.k);
        try {
            CertificateReport r = verify_certificate(g, ledger);
            r.trial = t;
            slots[t] = std::move(r);
        } catch (const RankDeficient &) {
            slots[t].reset();
        }
    });

    CertificateRun run;
    run.n = n;
    run.trials = trials;
    for (auto &slot : slots) {
        if (!slot) {
            ++run.rank_deficient;
            continue;
        }
        if (slot->in_d) {
            ++run.in_d;
            run.ia2_violations_in_d += slot->ia2_violations();
            run.failures_in_d += slot->all_pass() ? 0 : 1;
        }
        run.reports.push_back(std::move(*slot));
    }
    return run;
}

} // namespace haarlab
