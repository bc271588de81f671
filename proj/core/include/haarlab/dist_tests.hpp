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
#include <span>
#include <string>
#include <vector>

#include "haarlab/complex_matrix.hpp"
#include "haarlab/random_stream.hpp"

namespace haarlab {

/// Outcome of one statistical check. pass == (statistic < threshold).
struct TestReport {
    std::string description;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t n_samples = 0;
};

enum class ReferenceCdf {
    normal_half,     // N(0, 1/2): real or imaginary part of a standard G
    exponential_one, // Exponential(1): |G|^2
    uniform_unit,    // U(0, 1)
};

[[nodiscard]] double reference_cdf(ReferenceCdf ref, double x);
[[nodiscard]] std::string to_string(ReferenceCdf ref);

/// Asymptotic Kolmogorov critical value c(alpha): 1.628 at 0.01 and 1.358 at
/// 0.05; other levels are solved from the Kolmogorov tail series.
[[nodiscard]] double ks_critical_value(double alpha);

/// One-sample Kolmogorov-Smirnov test, threshold c(alpha) / sqrt(N).
/// Requires at least 100 samples.
[[nodiscard]] TestReport ks_statistic(std::span<const double> samples,
                                      ReferenceCdf ref, double alpha = 0.01);

/// Two-sample KS test, threshold c(alpha) sqrt((N + M) / (N M)).
[[nodiscard]] TestReport ks_two_sample(std::span<const double> a,
                                       std::span<const double> b,
                                       double alpha = 0.01);

/// |mean(values) - target| against 5 standard errors of the sample mean.
[[nodiscard]] TestReport mean_report(std::string description,
                                     std::span<const double> values,
                                     double target);
[[nodiscard]] TestReport mean_report(std::string description,
                                     std::span<const Complex> values,
                                     Complex target);

/// Realizations of sqrt(n) U_ij for one entry, gathered over trials.
struct SampleBatch {
    std::vector<Complex> values;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t row = 0;
    std::size_t col = 0;
    std::string selection = "upper-left";
    std::uint64_t master_seed = 0;
};

/// One batch per corner entry (row-major). Trial t draws its coupled sample
/// from derive_stream(stream, t).
[[nodiscard]] std::vector<SampleBatch>
collect_corner_samples(const RandomStream &stream, std::size_t n,
                       std::size_t k, std::size_t trials, unsigned workers = 1);

/// Per corner entry: KS of Re and Im against N(0, 1/2), KS of |.|^2 against
/// Exponential(1), and the moment checks E x = 0 and E|x|^2 = 1.
[[nodiscard]] std::vector<TestReport>
entrywise_gaussianity(const RandomStream &stream, std::size_t n, std::size_t k,
                      std::size_t trials, double alpha = 0.01,
                      unsigned workers = 1);

/// Per unordered pair of distinct corner entries X, Y: covariance
/// E[X conj Y] - E[X] E[conj Y] and pseudo-covariance E[XY] - E[X] E[Y],
/// each against 5 standard errors. Per entry also the pseudo-variance E[X^2].
[[nodiscard]] std::vector<TestReport>
independence_check(const RandomStream &stream, std::size_t n, std::size_t k,
                   std::size_t trials, unsigned workers = 1);

/// A deterministic choice of k rows and k columns (0-based).
struct Selection {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;

    [[nodiscard]] std::string describe() const; // 1-based, e.g. "rows(1,2)xcols(1,2)"
};

/// Per-selection moments of the selected sqrt(n)-scaled entries, one value
/// per trial (averaged over the k^2 entries).
struct SelectionMoments {
    std::string selection;
    double mean_abs = 0.0;
    double mean_abs2 = 0.0;
    std::vector<double> per_trial_abs;
    std::vector<double> per_trial_abs2;
};

[[nodiscard]] std::vector<SelectionMoments>
selection_moments(const RandomStream &stream, std::size_t n, std::size_t k,
                  const std::vector<Selection> &selections, std::size_t trials,
                  unsigned workers = 1);

/// For every pair of selections a < b and both absolute moments, the paired
/// per-trial difference against 5 standard errors. Trial t uses a full Haar
/// unitary from derive_stream(stream, t).
[[nodiscard]] std::vector<TestReport>
submatrix_invariance(const RandomStream &stream, std::size_t n, std::size_t k,
                     const std::vector<Selection> &selections,
                     std::size_t trials, unsigned workers = 1);

/// Data-dependent selection: per sample, the k^2 entries of smallest
/// modulus. Not a test; it shows that such a choice breaks E n|U_ij|^2 = 1.
struct AdversarialDemo {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t trials = 0;
    double mean_scaled_abs2 = 0.0; // average of n |U_ij|^2 over chosen entries
    double baseline = 1.0;
    double standard_error = 0.0;
    double z_score = 0.0; // (mean - baseline) / standard_error
};

[[nodiscard]] AdversarialDemo
adversarial_selection_demo(const RandomStream &stream, std::size_t n,
                           std::size_t k, std::size_t trials,
                           unsigned workers = 1);

} // namespace haarlab
