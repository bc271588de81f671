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

#include "haarlab/complex_matrix.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace haarlab {

namespace {

// sum_i conj(a[i * sa]) * b[i * sb] for i < n.
Complex strided_inner(const Complex *a, std::size_t sa, const Complex *b,
                      std::size_t sb, std::size_t n) {
    if (n <= kCompensationThreshold) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex x = a[i * sa];
            const Complex y = b[i * sb];
            re += x.real() * y.real() + x.imag() * y.imag();
            im += x.real() * y.imag() - x.imag() * y.real();
        }
        return {re, im};
    }
    CompensatedSum re;
    CompensatedSum im;
    for (std::size_t i = 0; i < n; ++i) {
        const Complex x = a[i * sa];
        const Complex y = b[i * sb];
        re.add(x.real() * y.real() + x.imag() * y.imag());
        im.add(x.real() * y.imag() - x.imag() * y.real());
    }
    return {re.value(), im.value()};
}

double strided_norm2(const Complex *a, std::size_t sa, std::size_t n) {
    if (n <= kCompensationThreshold) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += std::norm(a[i * sa]);
        }
        return s;
    }
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i) {
        s.add(std::norm(a[i * sa]));
    }
    return s.value();
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }
    if (rows > std::numeric_limits<std::size_t>::max() / sizeof(Complex) / cols) {
        throw std::length_error("ComplexMatrix: " + std::to_string(rows) + "x" +
                                std::to_string(cols) + " exceeds addressable size");
    }
    entries_.assign(rows * cols, Complex{});
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

std::vector<Complex> ComplexMatrix::column(std::size_t j) const {
    std::vector<Complex> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

ComplexMatrix ComplexMatrix::top_left(std::size_t rows,
                                      std::size_t cols) const {
    if (rows > rows_ || cols > cols_) {
        throw DimensionMismatch("top_left: block exceeds matrix");
    }
    ComplexMatrix out(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        std::copy_n(entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                    cols, out.entries_.begin() +
                              static_cast<std::ptrdiff_t>(i * cols));
    }
    return out;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex &z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

Complex column_inner(const ComplexMatrix &m, std::size_t j,
                     const ComplexMatrix &l, std::size_t ell) {
    if (m.rows() != l.rows()) {
        throw DimensionMismatch("column_inner: row counts differ (" +
                                std::to_string(m.rows()) + " vs " +
                                std::to_string(l.rows()) + ")");
    }
    if (j >= m.cols() || ell >= l.cols()) {
        throw DimensionMismatch("column_inner: column index out of range");
    }
    return strided_inner(m.data().data() + j, m.cols(), l.data().data() + ell,
                         l.cols(), m.rows());
}

double column_norm2(const ComplexMatrix &m, std::size_t j) {
    if (j >= m.cols()) {
        throw DimensionMismatch("column_norm2: column index out of range");
    }
    return strided_norm2(m.data().data() + j, m.cols(), m.rows());
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("inner: length mismatch");
    }
    return strided_inner(a.data(), 1, b.data(), 1, a.size());
}

double norm2(std::span<const Complex> a) {
    return strided_norm2(a.data(), 1, a.size());
}

ComplexMatrix adjoint(const ComplexMatrix &a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

ComplexMatrix multiply(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("multiply: inner dimensions differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t p = 0; p < a.cols(); ++p) {
            const Complex aip = a(i, p);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aip * b(p, j);
            }
        }
    }
    return out;
}

double orthonormality_error(const ComplexMatrix &a) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t l = j; l < a.cols(); ++l) {
            const Complex g = column_inner(a, j, a, l);
            const double target = (j == l) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g - target));
        }
    }
    return worst;
}

} // namespace haarlab
