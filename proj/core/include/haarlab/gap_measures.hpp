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
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <stdexcept>
#include <vector>

#include "haarlab/complex_matrix.hpp"
#include "haarlab/dist_tests.hpp"
#include "haarlab/random_stream.hpp"

namespace haarlab {

using StateVector = std::vector<Complex>;

class InvalidDensityMatrix : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class DegenerateSample : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct HermitianEigen {
    std::vector<double> values; // descending
    ComplexMatrix vectors;      // column m is the eigenvector for values[m]
};

/// Cyclic Jacobi iteration for a Hermitian matrix; sweeps until the
/// off-diagonal Frobenius norm drops below tol (or 100 sweeps).
[[nodiscard]] HermitianEigen jacobi_eigen(const ComplexMatrix &a,
                                          double tol = 1e-12);

/**
 * Hermitian, positive semidefinite, unit-trace matrix with its spectral
 * decomposition rho = sum_m p_m |chi_m><chi_m| cached.
 */
class DensityMatrix {
  public:
    /// weights >= 0 summing to 1 (within 1e-10); basis columns orthonormal
    /// (within 1e-10). Defaults to the standard basis.
    static DensityMatrix from_spectrum(std::span<const double> weights,
                                       const std::optional<ComplexMatrix> &basis =
                                           std::nullopt);

    /// Decomposes a raw Hermitian matrix. Eigenvalues in [-1e-12, 0) are
    /// clamped to 0 and the weights renormalized; anything more negative is
    /// rejected.
    static DensityMatrix from_matrix(const ComplexMatrix &rho);

    [[nodiscard]] std::size_t dim() const noexcept { return weights_.size(); }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return rho_; }
    [[nodiscard]] const std::vector<double> &eigenvalues() const noexcept {
        return weights_;
    }
    [[nodiscard]] const ComplexMatrix &eigenvectors() const noexcept {
        return basis_;
    }
    /// tr rho^2
    [[nodiscard]] double purity() const noexcept;

  private:
    DensityMatrix(std::vector<double> weights, ComplexMatrix basis);

    std::vector<double> weights_;
    ComplexMatrix basis_;
    ComplexMatrix rho_;
};

[[nodiscard]] DensityMatrix
make_density_matrix(std::span<const double> weights,
                    const std::optional<ComplexMatrix> &basis = std::nullopt);

/// Diagonal rho_beta = exp(-beta H) / Z for H = diag(energies), beta >= 0.
[[nodiscard]] DensityMatrix gibbs_density_matrix(std::span<const double> energies,
                                                 double beta);

/// Sample of G(rho): sum_m sqrt(p_m) z_m chi_m, z_m standard complex Gaussian.
[[nodiscard]] StateVector sample_gaussian_state(const DensityMatrix &rho,
                                                RandomStream &stream);

/// Exact sample of GA(rho), the ||psi||^2-weighted Gaussian measure.
/// Eigen-coordinate m is picked with probability p_m and its |.|^2 drawn from
/// Gamma(2, p_m) with a uniform phase; the other coordinates stay Gaussian.
[[nodiscard]] StateVector sample_ga(const DensityMatrix &rho,
                                    RandomStream &stream);

/// GA(rho) projected to the unit sphere.
[[nodiscard]] StateVector sample_gap(const DensityMatrix &rho,
                                     RandomStream &stream);

struct ConditionalDraw {
    StateVector psi;      // normalized conditional wave function
    std::size_t index = 0; // the environment basis vector J (0-based)
    double weight_sum = 0.0;
    double min_weight = 0.0;
};

/// Draws the first k rows of a Haar unitary, forms psi_j = sum_i c_i U_ij
/// chi_i for every environment index j, picks J with P(J = j) = ||psi_j||^2
/// by inverse CDF, and returns psi_J normalized.
[[nodiscard]] ConditionalDraw
draw_conditional_wavefunction(std::span<const Complex> c, std::size_t n,
                              RandomStream &stream);

[[nodiscard]] StateVector
sample_conditional_wavefunction(std::span<const Complex> c, std::size_t n,
                                RandomStream &stream);

/// (1/N) sum_t psi_t psi_t^dagger
[[nodiscard]] ComplexMatrix
empirical_covariance(std::span<const StateVector> samples);

/// Entrywise |E psi psi^dagger - rho| against 5 standard errors (upper
/// triangle including the diagonal).
[[nodiscard]] std::vector<TestReport>
covariance_reports(std::span<const StateVector> samples,
                   const DensityMatrix &rho, const std::string &label);

/**
 * Compares unit samples with GAP(rho): the entrywise covariance checks, and
 * per eigenvector chi_m a two-sample KS test of |<chi_m, psi>|^2 against as
 * many fresh sample_gap(rho) draws (trial t from derive_stream(reference, t)).
 */
[[nodiscard]] std::vector<TestReport>
compare_to_gap(std::span<const StateVector> samples, const DensityMatrix &rho,
               const RandomStream &reference, double alpha = 0.01,
               unsigned workers = 1);

/// The G -> GA -> GAP chain checks for one rho, `samples` draws each.
[[nodiscard]] std::vector<TestReport>
gap_chain_checks(const DensityMatrix &rho, const RandomStream &stream,
                 std::size_t samples, double alpha = 0.01,
                 unsigned workers = 1);

/// Conditional wave functions (trial t from derive_stream(stream, t)).
[[nodiscard]] std::vector<StateVector>
sample_conditional_batch(std::span<const Complex> c, std::size_t n,
                         const RandomStream &stream, std::size_t samples,
                         unsigned workers = 1);

// Text formats, validated on load:
//   density-matrix v1 <k>   then k lines of k entries "re,im"
//   spectrum v1 <k>         then k weights
[[nodiscard]] DensityMatrix read_density_matrix(std::istream &is);
void write_density_matrix(std::ostream &os, const DensityMatrix &rho);

} // namespace haarlab
