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
#include <stdexcept>
#include <vector>

#include "haarlab/complex_matrix.hpp"
#include "haarlab/random_stream.hpp"

namespace haarlab {

/// Gram-Schmidt met a residual below rank_tolerance(). The source columns
/// were (numerically) linearly dependent.
class RankDeficient : public std::runtime_error {
  public:
    RankDeficient(std::size_t column, double residual_norm, double tolerance);

    [[nodiscard]] std::size_t column() const noexcept { return column_; }
    [[nodiscard]] double residual_norm() const noexcept { return residual_; }
    [[nodiscard]] double tolerance() const noexcept { return tolerance_; }

  private:
    std::size_t column_;
    double residual_;
    double tolerance_;
};

/// 1e-12 * sqrt(n) * columns.
[[nodiscard]] double rank_tolerance(std::size_t n, std::size_t columns);

/**
 * Orthonormalizes the first m columns of g by modified Gram-Schmidt.
 *
 * Column j of the result is the normalized residual of g_j against the
 * span of the previous output columns, with projection coefficients
 * <U_l, r> in the conjugate-first convention of column_inner(). If a pass
 * shrinks the residual below 1/sqrt(2) of its incoming norm the column gets
 * one more projection pass. Column j depends only on g_0..g_j, so the
 * result for m columns is a prefix of the result for any larger m.
 */
[[nodiscard]] ComplexMatrix gram_schmidt_columns(const ComplexMatrix &g,
                                                 std::size_t m);

/// A Gaussian n x k panel and its Gram-Schmidt image.
struct CoupledSample {
    std::size_t n = 0;
    std::size_t k = 0;
    ComplexMatrix gaussian;
    ComplexMatrix unitary;
};

/// The first k columns of a Haar unitary together with the Gaussian panel
/// they were built from. Costs O(n k^2); the n x n matrix is never formed.
[[nodiscard]] CoupledSample sample_coupled(RandomStream &stream, std::size_t n,
                                           std::size_t k);

[[nodiscard]] ComplexMatrix sample_haar_unitary(RandomStream &stream,
                                                std::size_t n);

/// sqrt(n) times the first k coordinates of a uniform unit vector in C^n.
[[nodiscard]] std::vector<Complex>
sample_sphere_marginal(RandomStream &stream, std::size_t n, std::size_t k);

} // namespace haarlab
