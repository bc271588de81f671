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

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace haarlab {

using Complex = std::complex<double>;

class DimensionMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Sums longer than this use compensated (Neumaier) accumulation.
inline constexpr std::size_t kCompensationThreshold = std::size_t{1} << 16;

/// Neumaier's improved Kahan summation for a real running total.
class CompensatedSum {
  public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/**
 * Dense complex matrix stored row-major.
 *
 * Entry (i, j) lives at data()[i * cols() + j]. Both dimensions are at
 * least one; a default-constructed matrix is the only empty state and is
 * not a valid argument to any operation.
 */
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    /// Zero-filled rows x cols matrix. Throws std::invalid_argument on a zero
    /// dimension and std::length_error if rows * cols overflows.
    ComplexMatrix(std::size_t rows, std::size_t cols);

    static ComplexMatrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    Complex &operator()(std::size_t i, std::size_t j) noexcept {
        return entries_[i * cols_ + j];
    }
    const Complex &operator()(std::size_t i, std::size_t j) const noexcept {
        return entries_[i * cols_ + j];
    }

    [[nodiscard]] std::span<Complex> data() noexcept { return entries_; }
    [[nodiscard]] std::span<const Complex> data() const noexcept {
        return entries_;
    }

    /// Copy of column j as a contiguous vector.
    [[nodiscard]] std::vector<Complex> column(std::size_t j) const;

    /// The leading rows x cols block.
    [[nodiscard]] ComplexMatrix top_left(std::size_t rows,
                                         std::size_t cols) const;

    [[nodiscard]] bool all_finite() const noexcept;

    friend bool operator==(const ComplexMatrix &,
                           const ComplexMatrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// <M_j, L_l> = sum_i conj(M_ij) L_il. The first argument is conjugated.
[[nodiscard]] Complex column_inner(const ComplexMatrix &m, std::size_t j,
                                   const ComplexMatrix &l, std::size_t ell);

/// ||M_j||^2, accumulated in real arithmetic.
[[nodiscard]] double column_norm2(const ComplexMatrix &m, std::size_t j);

/// sum_i conj(a_i) b_i over two equally long vectors.
[[nodiscard]] Complex inner(std::span<const Complex> a,
                            std::span<const Complex> b);

[[nodiscard]] double norm2(std::span<const Complex> a);

[[nodiscard]] ComplexMatrix adjoint(const ComplexMatrix &a);

[[nodiscard]] ComplexMatrix multiply(const ComplexMatrix &a,
                                     const ComplexMatrix &b);

/// max_{j,l} |<A_j, A_l> - delta_jl| over the columns of a.
[[nodiscard]] double orthonormality_error(const ComplexMatrix &a);

} // namespace haarlab
