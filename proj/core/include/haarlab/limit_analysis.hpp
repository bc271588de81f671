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
#include <optional>
#include <string>
#include <vector>

#include "haarlab/complex_matrix.hpp"
#include "haarlab/haar_sampler.hpp"
#include "haarlab/random_stream.hpp"

namespace haarlab {

/// Smallest R with P(|G| < R) >= 1 - delta for a standard complex Gaussian:
/// |G|^2 is Exponential(1), so R = sqrt(ln(1/delta)). Throws
/// std::domain_error unless 0 < delta < 1.
[[nodiscard]] double radius_for_delta(double delta);

struct EventParams {
    std::size_t n = 0;
    std::size_t k = 0;
    double delta = 0.0;
    double radius = 0.0;

    /// Parameters with radius = radius_for_delta(delta).
    static EventParams standard(std::size_t n, std::size_t k, double delta);
};

/// The "probable geometry" events evaluated on one Gaussian panel.
///   A(j,l): |<G_j, G_l>| < sqrt(n / delta)        for j != l
///   B(j):   | ||G_j||^2 / n - 1 | < sqrt(2 / (n delta))
///   C(i,j): |G_ij| < R                            for i, j < k
///   D:      conjunction of all of the above
struct EventReport {
    struct Pair {
        std::size_t j = 0;
        std::size_t l = 0;
        double value = 0.0;
        bool holds = false;
    };

    std::vector<Pair> a_pairs; // ordered pairs, j != l
    std::vector<double> b_values;
    std::vector<bool> b_cols;
    std::vector<double> c_values; // row-major k x k
    std::vector<bool> c_entries;  // row-major k x k
    bool d_all = false;
    double a_threshold = 0.0;
    double b_threshold = 0.0;
    double c_threshold = 0.0;
};

/// g must be params.n x params.k with n >= k.
[[nodiscard]] EventReport evaluate_events(const ComplexMatrix &g,
                                          const EventParams &params);

/// sum over the top k x k corner of |sqrt(n) U_ij - G_ij|.
[[nodiscard]] double coupling_distance(const CoupledSample &sample);

// ---------------------------------------------------------------------------
// Convergence in probability

struct ConvergencePoint {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t rank_deficient = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

struct ConvergenceCurve {
    std::size_t k = 0;
    double eps = 0.0;
    std::vector<ConvergencePoint> points;
};

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95% coverage.
[[nodiscard]] Interval wilson_interval(std::size_t successes,
                                       std::size_t trials,
                                       double z = 1.959963984540054);

/// Estimates P(S < eps) for each n. Trial t at dimension n draws from
/// derive_stream(derive_stream(stream, n), t); rank-deficient draws count as
/// trials without success and are reported separately.
[[nodiscard]] ConvergenceCurve
estimate_coupling_probability(const RandomStream &stream, std::size_t k,
                              double eps, const std::vector<std::size_t> &ns,
                              std::size_t trials, unsigned workers = 1);

/// Adjacent points either increase or have overlapping intervals.
[[nodiscard]] bool is_monotone_up_to_overlap(const ConvergenceCurve &curve);
/// Lower CI bound of the last point exceeds the upper bound of the first.
[[nodiscard]] bool endpoints_separated(const ConvergenceCurve &curve);

// ---------------------------------------------------------------------------
// Event probabilities

struct RateEstimate {
    std::string name;
    std::size_t hits = 0;
    std::size_t trials = 0;
    double rate = 0.0;
    double mc_sigma = 0.0; // binomial sigma at the reference probability
    double bound = 0.0;    // reference probability
    bool pass = false;
};

struct EventRates {
    EventParams params;
    std::size_t trials = 0;
    /// A (unordered pairs) and B checked as rate >= 1 - delta - 5 sigma; C as
    /// |rate - (1 - delta)| < 5 sigma; D as rate >= 1 - 2 k^2 delta - 5 sigma.
    std::vector<RateEstimate> estimates;
    /// B against the sharper Chebyshev bound 1 - delta / 2 (reported only).
    std::vector<RateEstimate> sharper_b;
};

[[nodiscard]] EventRates estimate_event_rates(const RandomStream &stream,
                                              const EventParams &params,
                                              std::size_t trials,
                                              unsigned workers = 1);

// ---------------------------------------------------------------------------
// Constant ledger and certificate

/// One "for sufficiently large n" requirement, satisfied when n > bound.
struct ThresholdCondition {
    std::string name;
    double bound = 0.0;
    std::size_t min_n = 0; // smallest integer n with n > bound
};

/**
 * The constants of the induction that bounds |sqrt(n) U_ij - G_ij|.
 *
 *   C_1    = 4 / sqrt(delta)
 *   C'_l   = 2 C_l + 1 / sqrt(delta)
 *   C''_j  = (sum_{l<j} C'_l) (eps / k^2 + R)
 *   C'''_j = sum_{l<j} C'_l^2
 *   C~_j   = 2 sqrt(2 / delta) + 2 sqrt(C'''_j)
 *   C_j    = 2 C~_j + 2 sqrt(C'''_j)              (j >= 2)
 *
 * Vectors are indexed from column 1: c[0] is C_1. C'' and C''' start at
 * column 2, so c_double_prime[0] is C''_2.
 */
struct ConstantLedger {
    std::size_t k = 0;
    double delta = 0.0;
    double eps = 0.0;
    double radius = 0.0;
    std::vector<double> c;
    std::vector<double> c_prime;
    std::vector<double> c_double_prime;
    std::vector<double> c_triple_prime;
    std::vector<double> c_tilde;
    std::vector<ThresholdCondition> conditions;
    std::size_t n0 = 0;

    /// C'''_j for j >= 1, with the empty sum C'''_1 = 0.
    [[nodiscard]] double triple_prime(std::size_t j) const;
};

/// Throws std::domain_error unless 0 < delta < 1, eps > 0 and k >= 1.
[[nodiscard]] ConstantLedger build_constant_ledger(std::size_t k, double delta,
                                                   double eps);
[[nodiscard]] ConstantLedger build_constant_ledger(std::size_t k, double delta,
                                                   double eps, double radius);

/**
 * Every large-n requirement used by the induction:
 *   base IA2:      (2 / sqrt(delta n)) R < eps / k^2
 *   small-x[j]:    x = sqrt(2 / (n delta)) + sqrt(C'''_j / n) < 1/2, so that
 *                  1 / (1 - x) < 1 + 2x (j = 1 covers the base-case ratio)
 *   ratio[j]:      C~_j / sqrt(n) < 1                           (j >= 2)
 *   IA2[j]:        (C~_j R + 2 C''_j) / sqrt(n) < eps / k^2     (j >= 2)
 *   dimension:     n >= k
 */
[[nodiscard]] std::vector<ThresholdCondition>
threshold_conditions(const ConstantLedger &ledger);

/// max over threshold_conditions() of min_n.
[[nodiscard]] std::size_t sufficiency_threshold(const ConstantLedger &ledger);

struct CertificateCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct CertificateReport {
    std::size_t n = 0;
    std::size_t trial = 0; // set by run_certificate_trials
    bool in_d = false;
    bool below_threshold = false; // n < ledger.n0: no guarantee applies
    std::vector<CertificateCheck> checks;
    std::optional<std::string> first_failure;

    [[nodiscard]] bool all_pass() const noexcept { return !first_failure; }
    /// Number of failed IA2 (entrywise) checks.
    [[nodiscard]] std::size_t ia2_violations() const noexcept;
};

/**
 * Evaluates the estimate chain on one n x k Gaussian panel.
 *
 * Order per column j = 1..k: est1 (per l < j), est2 (per i <= k), est3,
 * est4, then IA2 (per i <= k) and IA1. Column 1 has only the base-case
 * ratio (named est4[j=1], bound 2 / sqrt(delta n)), IA2 and IA1. A final
 * check E compares the coupling distance with eps. Every inequality is
 * strict and evaluated without slack. Checks run whether or not the panel
 * lies in D; the guarantee only binds when in_d and n >= ledger.n0.
 */
[[nodiscard]] CertificateReport verify_certificate(const ComplexMatrix &g,
                                                   const ConstantLedger &ledger);

struct CertificateRun {
    std::size_t n = 0;
    std::size_t trials = 0;
    std::size_t in_d = 0;
    std::size_t rank_deficient = 0;
    std::size_t ia2_violations_in_d = 0;
    std::size_t failures_in_d = 0; // trials in D with any failed check
    std::vector<CertificateReport> reports;
};

/// Trial t draws an n x k panel from derive_stream(stream, t).
[[nodiscard]] CertificateRun run_certificate_trials(const RandomStream &stream,
                                                    const ConstantLedger &ledger,
                                                    std::size_t n,
                                                    std::size_t trials,
                                                    unsigned workers = 1);

} // namespace haarlab
