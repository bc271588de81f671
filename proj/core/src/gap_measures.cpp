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

#include "haarlab/gap_measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "haarlab/haar_sampler.hpp"
#include "haarlab/matrix_io.hpp"
#include "haarlab/parallel.hpp"

namespace haarlab {

namespace {

constexpr double kTraceTolerance = 1e-10;
constexpr double kHermitianTolerance = 1e-12;
constexpr double kClampTolerance = 1e-12;

// Uniform phase times a modulus drawn with |y|^2 = r2.
Complex with_uniform_phase(double r2, RandomStream &stream) {
    const double angle = 2.0 * std::numbers::pi * stream.uniform();
    return std::polar(std::sqrt(r2), angle);
}

StateVector rotate(const ComplexMatrix &basis, const StateVector &coords) {
    const std::size_t k = coords.size();
    StateVector psi(k);
    for (std::size_t a = 0; a < k; ++a) {
        Complex s{};
        for (std::size_t m = 0; m < k; ++m) {
            s += basis(a, m) * coords[m];
        }
        psi[a] = s;
    }
    return psi;
}

// First index whose cumulative weight exceeds u; rounding leftovers go to the
// last index with positive weight.
std::size_t inverse_cdf(std::span<const double> weights, double u) {
    double cum = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t m = 0; m < weights.size(); ++m) {
        if (weights[m] > 0.0) {
            last_positive = m;
        }
        cum += weights[m];
        if (u < cum && weights[m] > 0.0) {
            return m;
        }
    }
    return last_positive;
}

} // namespace

HermitianEigen jacobi_eigen(const ComplexMatrix &input, double tol) {
    if (input.empty() || input.rows() != input.cols()) {
        throw DimensionMismatch("jacobi_eigen: matrix must be square");
    }
    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = 0; q < n; ++q) {
                if (p != q) {
                    s += std::norm(a(p, q));
                }
            }
        }
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() >= tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex g = a(p, q);
                const double mag = std::abs(g);
                if (mag == 0.0) {
                    continue;
                }
                // Rotate the 2x2 block [[a_pp, g], [conj g, a_qq]]: the
                // diagonal phase diag(1, conj(g)/|g|) makes it real symmetric,
                // then a real Jacobi rotation zeroes it.
                const Complex phase = std::conj(g) / mag;
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex j00 = c;
                const Complex j01 = s;
                const Complex j10 = -s * phase;
                const Complex j11 = c * phase;

                for (std::size_t r = 0; r < n; ++r) {
                    const Complex x = a(r, p);
                    const Complex y = a(r, q);
                    a(r, p) = x * j00 + y * j10;
                    a(r, q) = x * j01 + y * j11;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex x = a(p, r);
                    const Complex y = a(q, r);
                    a(p, r) = std::conj(j00) * x + std::conj(j10) * y;
                    a(q, r) = std::conj(j01) * x + std::conj(j11) * y;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const Complex x = v(r, p);
                    const Complex y = v(r, q);
                    v(r, p) = x * j00 + y * j10;
                    v(r, q) = x * j01 + y * j11;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });
    HermitianEigen out;
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t m = 0; m < n; ++m) {
        out.values.push_back(a(order[m], order[m]).real());
        for (std::size_t r = 0; r < n; ++r) {
            out.vectors(r, m) = v(r, order[m]);
        }
    }
    return out;
}

DensityMatrix::DensityMatrix(std::vector<double> weights, ComplexMatrix basis)
    : weights_(std::move(weights)), basis_(std::move(basis)) {
    const std::size_t k = weights_.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return weights_[x] > weights_[y];
    });
    std::vector<double> w(k);
    ComplexMatrix b(k, k);
    for (std::size_t m = 0; m < k; ++m) {
        w[m] = weights_[order[m]];
        for (std::size_t r = 0; r < k; ++r) {
            b(r, m) = basis_(r, order[m]);
        }
    }
    weights_ = std::move(w);
    basis_ = std::move(b);

    rho_ = ComplexMatrix(k, k);
    for (std::size_t m = 0; m < k; ++m) {
        if (weights_[m] == 0.0) {
            continue;
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t c = 0; c < k; ++c) {
                rho_(a, c) += weights_[m] * basis_(a, m) * std::conj(basis_(c, m));
            }
        }
    }
}

DensityMatrix DensityMatrix::from_spectrum(std::span<const double> weights,
                                           const std::optional<ComplexMatrix> &basis) {
    if (weights.empty()) {
        throw InvalidDensityMatrix("density matrix needs at least one weight");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw InvalidDensityMatrix("weights must be finite and non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kTraceTolerance) {
        throw InvalidDensityMatrix("weights must sum to 1 (sum is " +
                                   std::to_string(total) + ")");
    }
    const std::size_t k = weights.size();
    ComplexMatrix b = ComplexMatrix::identity(k);
    if (basis) {
        if (basis->rows() != k || basis->cols() != k) {
            throw InvalidDensityMatrix("basis must be k x k");
        }
        if (orthonormality_error(*basis) > 1e-10) {
            throw InvalidDensityMatrix("basis vectors are not orthonormal");
        }
        b = *basis;
    }
    return DensityMatrix(std::vector<double>(weights.begin(), weights.end()),
                         std::move(b));
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix &rho) {
    if (rho.empty() || rho.rows() != rho.cols()) {
        throw InvalidDensityMatrix("density matrix must be square");
    }
    if (!rho.all_finite()) {
        throw InvalidDensityMatrix("density matrix has non-finite entries");
    }
    const std::size_t k = rho.rows();
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = a; c < k; ++c) {
            if (std::abs(rho(a, c) - std::conj(rho(c, a))) > kHermitianTolerance) {
                throw InvalidDensityMatrix("density matrix is not Hermitian");
            }
        }
    }
    HermitianEigen eig = jacobi_eigen(rho);
    double trace = 0.0;
    for (double &p : eig.values) {
        if (p < -kClampTolerance) {
            throw InvalidDensityMatrix("density matrix has a negative eigenvalue (" +
                                       std::to_string(p) + ")");
        }
        trace += p;
        p = std::max(p, 0.0);
    }
    if (std::abs(trace - 1.0) > kTraceTolerance) {
        throw InvalidDensityMatrix("density matrix trace must be 1 (trace is " +
                                   std::to_string(trace) + ")");
    }
    const double clamped = std::accumulate(eig.values.begin(), eig.values.end(), 0.0);
    for (double &p : eig.values) {
        p /= clamped;
    }
    return DensityMatrix(std::move(eig.values), std::move(eig.vectors));
}

double DensityMatrix::purity() const noexcept {
    double s = 0.0;
    for (double p : weights_) {
        s += p * p;
    }
    return s;
}

DensityMatrix make_density_matrix(std::span<const double> weights,
                                  const std::optional<ComplexMatrix> &basis) {
    return DensityMatrix::from_spectrum(weights, basis);
}

DensityMatrix gibbs_density_matrix(std::span<const double> energies, double beta) {
    if (energies.empty()) {
        throw InvalidDensityMatrix("gibbs: need at least one energy level");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw InvalidDensityMatrix("gibbs: beta must be finite and >= 0");
    }
    for (double e : energies) {
        if (!std::isfinite(e)) {
            throw InvalidDensityMatrix("gibbs: energies must be finite");
        }
    }
    // Shifted by the ground energy so the largest exponent is exactly 0.
    const double ground = *std::min_element(energies.begin(), energies.end());
    std::vector<double> w(energies.size());
    double z = 0.0;
    for (std::size_t m = 0; m < w.size(); ++m) {
        w[m] = std::exp(-beta * (energies[m] - ground));
        z += w[m];
    }
    for (double &p : w) {
        p /= z;
    }
    // Renormalized exactly; the sum may be off by an ulp.
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (std::abs(total - 1.0) > kTraceTolerance) {
        throw InvalidDensityMatrix("gibbs: weights do not normalize");
    }
    return DensityMatrix::from_spectrum(w);
}

StateVector sample_gaussian_state(const DensityMatrix &rho, RandomStream &stream) {
    const auto &p = rho.eigenvalues();
    StateVector y(p.size());
    for (std::size_t m = 0; m < p.size(); ++m) {
        y[m] = std::sqrt(p[m]) * sample_std_complex_gaussian(stream);
    }
    return rotate(rho.eigenvectors(), y);
}

StateVector sample_ga(const DensityMatrix &rho, RandomStream &stream) {
    const auto &p = rho.eigenvalues();
    const std::size_t chosen = inverse_cdf(p, stream.uniform());
    StateVector y(p.size());
    for (std::size_t m = 0; m < p.size(); ++m) {
        if (m == chosen) {
            const double r2 =
                p[m] * (sample_exponential(stream) + sample_exponential(stream));
            y[m] = with_uniform_phase(r2, stream);
        } else {
            y[m] = std::sqrt(p[m]) * sample_std_complex_gaussian(stream);
        }
    }
    return rotate(rho.eigenvectors(), y);
}

StateVector sample_gap(const DensityMatrix &rho, RandomStream &stream) {
    StateVector psi = sample_ga(rho, stream);
    const double length = std::sqrt(norm2(psi));
    if (!(length >= 1e-150)) {
        throw DegenerateSample("sample_gap: GA sample has vanishing norm");
    }
    for (Complex &z : psi) {
        z /= length;
    }
    return psi;
}

ConditionalDraw draw_conditional_wavefunction(std::span<const Complex> c,
                                              std::size_t n, RandomStream &stream) {
    const std::size_t k = c.size();
    if (k == 0 || n < k) {
        throw std::invalid_argument("conditional wave function: need 1 <= k <= n");
    }
    const double total = norm2(c);
    if (std::abs(total - 1.0) > kTraceTolerance) {
        throw std::invalid_argument(
            "conditional wave function: sum |c_i|^2 must be 1");
    }
    // Column i of v is row i of the Haar unitary: U_ij = v(j, i).
    const ComplexMatrix g = sample_gaussian_matrix(stream, n, k);
    const ComplexMatrix v = gram_schmidt_columns(g, k);

    std::vector<double> weights(n);
    for (std::size_t j = 0; j < n; ++j) {
        double w = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            w += std::norm(c[i] * v(j, i));
        }
        weights[j] = w;
    }
    ConditionalDraw out;
    out.weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    out.min_weight = *std::min_element(weights.begin(), weights.end());

    double cum = 0.0;
    const double u = stream.uniform();
    out.index = n - 1;
    for (std::size_t j = 0; j < n; ++j) {
        cum += weights[j];
        if (u < cum) {
            out.index = j;
            break;
        }
    }
    out.psi.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.psi[i] = c[i] * v(out.index, i);
    }
    const double length = std::sqrt(norm2(out.psi));
    if (!(length > 0.0)) {
        throw DegenerateSample("conditional wave function has zero norm");
    }
    for (Complex &z : out.psi) {
        z /= length;
    }
    return out;
}

StateVector sample_conditional_wavefunction(std::span<const Complex> c,
                                            std::size_t n, RandomStream &stream) {
    return draw_conditional_wavefunction(c, n, stream).psi;
}

ComplexMatrix empirical_covariance(std::span<const StateVector> samples) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical_covariance: no samples");
    }
    const std::size_t k = samples.front().size();
    ComplexMatrix cov(k, k);
    for (const StateVector &psi : samples) {
        if (psi.size() != k) {
            throw DimensionMismatch("empirical_covariance: dimension mismatch");
        }
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
                cov(a, b) += psi[a] * std::conj(psi[b]);
            }
        }
    }
    const double nd = static_cast<double>(samples.size());
    for (Complex &z : cov.data()) {
        z /= nd;
    }
    return cov;
}

std::vector<TestReport> covariance_reports(std::span<const StateVector> samples,
                                           const DensityMatrix &rho,
                                           const std::string &label) {
    const std::size_t k = rho.dim();
    if (samples.size() < 2) {
        throw std::invalid_argument("covariance_reports: need at least 2 samples");
    }
    for (const StateVector &psi : samples) {
        if (psi.size() != k) {
            throw DimensionMismatch("covariance_reports: dimension mismatch");
        }
    }
    std::vector<TestReport> out;
    std::vector<Complex> x(samples.size());
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            for (std::size_t t = 0; t < samples.size(); ++t) {
                x[t] = samples[t][a] * std::conj(samples[t][b]);
            }
            TestReport r = mean_report(label + " covariance[" + std::to_string(a + 1) +
                                           "," + std::to_string(b + 1) + "]",
                                       x, rho.matrix()(a, b));
            // Exact zero-variance entries (e.g. a vanishing weight) compare
            // against a 1e-12 floor instead of 0.
            r.threshold += 1e-12;
            r.pass = r.statistic < r.threshold;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<TestReport> compare_to_gap(std::span<const StateVector> samples,
                                       const DensityMatrix &rho,
                                       const RandomStream &reference, double alpha,
                                       unsigned workers) {
    const std::size_t k = rho.dim();
    if (samples.size() < 1000) {
        throw std::invalid_argument("compare_to_gap: need at least 1000 samples");
    }
    for (const StateVector &psi : samples) {
        if (psi.size() != k) {
            throw DimensionMismatch("compare_to_gap: sample dimension differs from rho");
        }
        if (std::abs(norm2(psi) - 1.0) > 1e-10) {
            throw std::invalid_argument("compare_to_gap: samples must be unit vectors");
        }
    }
    std::vector<TestReport> out = covariance_reports(samples, rho, "samples");

    std::vector<StateVector> fresh(samples.size());
    parallel_for(fresh.size(), workers, [&](std::size_t t) {
        RandomStream s = derive_stream(reference, t);
        fresh[t] = sample_gap(rho, s);
    });

    const ComplexMatrix &chi = rho.eigenvectors();
    std::vector<double> a(samples.size());
    std::vector<double> b(fresh.size());
    for (std::size_t m = 0; m < k; ++m) {
        auto overlap = [&](const StateVector &psi) {
            Complex s{};
            for (std::size_t r = 0; r < k; ++r) {
                s += std::conj(chi(r, m)) * psi[r];
            }
            return std::norm(s);
        };
        std::transform(samples.begin(), samples.end(), a.begin(), overlap);
        std::transform(fresh.begin(), fresh.end(), b.begin(), overlap);
        TestReport r = ks_two_sample(a, b, alpha);
        r.description = "two-sample KS |<chi_" + std::to_string(m + 1) +
                        ",psi>|^2 vs GAP(rho)";
        out.push_back(r);
    }
    return out;
}

std::vector<TestReport> gap_chain_checks(const DensityMatrix &rho,
                                         const RandomStream &stream,
                                         std::size_t samples, double alpha,
                                         unsigned workers) {
    if (samples < 1000) {
        throw std::invalid_argument("gap_chain_checks: need at least 1000 samples");
    }
    auto draw = [&](std::uint64_t label, std::size_t count, auto sampler) {
        const RandomStream node = derive_stream(stream, label);
        std::vector<StateVector> out(count);
        parallel_for(count, workers, [&](std::size_t t) {
            RandomStream s = derive_stream(node, t);
            out[t] = sampler(rho, s);
        });
        return out;
    };
    auto norms = [](const std::vector<StateVector> &v) {
        std::vector<double> out(v.size());
        std::transform(v.begin(), v.end(), out.begin(),
                       [](const StateVector &psi) { return norm2(psi); });
        return out;
    };

    std::vector<TestReport> out;

    const auto gauss = draw(1, samples, sample_gaussian_state);
    for (TestReport &r : covariance_reports(gauss, rho, "G(rho)")) {
        out.push_back(std::move(r));
    }
    out.push_back(mean_report("G(rho) E||psi||^2 = tr rho = 1", norms(gauss), 1.0));

    const auto ga = draw(2, samples, sample_ga);
    out.push_back(mean_report("GA(rho) E||psi||^2 = 1 + tr rho^2", norms(ga),
                              1.0 + rho.purity()));

    // Oracle: resample G(rho) draws with weights ||psi||^2.
    const std::size_t ks_n = std::min<std::size_t>(samples, 10000);
    const auto pool = norms(draw(3, 10 * ks_n, sample_gaussian_state));
    std::vector<double> cum(pool.size());
    std::partial_sum(pool.begin(), pool.end(), cum.begin());
    RandomStream pick = derive_stream(stream, 4);
    std::vector<double> resampled(ks_n);
    for (double &x : resampled) {
        const double u = pick.uniform() * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const auto idx = std::min<std::size_t>(
            static_cast<std::size_t>(it - cum.begin()), pool.size() - 1);
        x = pool[idx];
    }
    const auto ga_norms = norms(ga);
    TestReport ks = ks_two_sample(
        std::span<const double>(ga_norms.data(), ks_n), resampled, alpha);
    ks.description = "two-sample KS ||psi||^2: exact GA vs reweighted G(rho)";
    out.push_back(ks);

    const auto gap = draw(5, samples, sample_gap);
    double worst_norm = 0.0;
    for (const StateVector &psi : gap) {
        worst_norm = std::max(worst_norm, std::abs(std::sqrt(norm2(psi)) - 1.0));
    }
    out.push_back({"GAP(rho) max | ||psi|| - 1 |", worst_norm, 1e-12,
                   worst_norm < 1e-12, gap.size()});
    const ComplexMatrix cov = empirical_covariance(gap);
    double worst_cov = 0.0;
    for (std::size_t a = 0; a < rho.dim(); ++a) {
        for (std::size_t b = 0; b < rho.dim(); ++b) {
            worst_cov = std::max(worst_cov, std::abs(cov(a, b) - rho.matrix()(a, b)));
        }
    }
    out.push_back({"GAP(rho) max-entry |E psi psi^dagger - rho|", worst_cov, 0.01,
                   worst_cov < 0.01, gap.size()});
    for (TestReport &r : covariance_reports(gap, rho, "GAP(rho)")) {
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<StateVector> sample_conditional_batch(std::span<const Complex> c,
                                                  std::size_t n,
                                                  const RandomStream &stream,
                                                  std::size_t samples,
                                                  unsigned workers) {
    std::vector<StateVector> out(samples);
    parallel_for(samples, workers, [&](std::size_t t) {
        RandomStream s = derive_stream(stream, t);
        out[t] = sample_conditional_wavefunction(c, n, s);
    });
    return out;
}

DensityMatrix read_density_matrix(std::istream &is) {
    std::string tag;
    std::string version;
    long long k = 0;
    if (!(is >> tag >> version >> k) || version != "v1" || k <= 0) {
        throw FormatError("expected 'density-matrix v1 <k>' or 'spectrum v1 <k>'");
    }
    const auto dim = static_cast<std::size_t>(k);
    if (tag == "spectrum") {
        std::vector<double> w(dim);
        std::string token;
        for (double &x : w) {
            if (!(is >> token)) {
                throw FormatError("spectrum truncated");
            }
            x = parse_double(token);
        }
        return DensityMatrix::from_spectrum(w);
    }
    if (tag != "density-matrix") {
        throw FormatError("unknown density format '" + tag + "'");
    }
    ComplexMatrix m(dim, dim);
    std::string token;
    for (Complex &z : m.data()) {
        if (!(is >> token)) {
            throw FormatError("density matrix truncated");
        }
        const auto comma = token.find(',');
        if (comma == std::string::npos) {
            throw FormatError("entry '" + token + "' is not of the form re,im");
        }
        z = {parse_double(token.substr(0, comma)), parse_double(token.substr(comma + 1))};
    }
    return DensityMatrix::from_matrix(m);
}

void write_density_matrix(std::ostream &os, const DensityMatrix &rho) {
    const std::size_t k = rho.dim();
    os << "density-matrix v1 " << k << '\n';
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) {
            const Complex z = rho.matrix()(a, b);
            os << (b ? " " : "") << format_hexfloat(z.real()) << ','
               << format_hexfloat(z.imag());
        }
        os << '\n';
    }
}

} // namespace haarlab
