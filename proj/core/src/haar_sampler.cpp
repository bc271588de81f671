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

#include "haarlab/haar_sampler.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace haarlab {

namespace {

std::string rank_message(std::size_t column, double residual,
                         double tolerance) {
    std::ostringstream os;
    os << "rank deficient: residual norm of column " << column + 1 << " is "
       << residual << " (tolerance " << tolerance << ")";
    return os.str();
}

// r -= <u_l, r> u_l for l < j; the columns of u are stored with stride cols.
void project_out(const ComplexMatrix &u, std::size_t j,
                 std::vector<Complex> &r) {
    const std::size_t n = r.size();
    const std::size_t stride = u.cols();
    const Complex *base = u.data().data();
    for (std::size_t l = 0; l < j; ++l) {
        const Complex *ul = base + l;
        Complex coef{};
        if (n <= kCompensationThreshold) {
            double re = 0.0;
            double im = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const Complex a = ul[i * stride];
                re += a.real() * r[i].real() + a.imag() * r[i].imag();
                im += a.real() * r[i].imag() - a.imag() * r[i].real();
            }
            coef = {re, im};
        } else {
            CompensatedSum re;
            CompensatedSum im;
            for (std::size_t i = 0; i < n; ++i) {
                const Complex a = ul[i * stride];
                re.add(a.real() * r[i].real() + a.imag() * r[i].imag());
                im.add(a.real() * r[i].imag() - a.imag() * r[i].real());
            }
            coef = {re.value(), im.value()};
        }
        for (std::size_t i = 0; i < n; ++i) {
            r[i] -= coef * ul[i * stride];
        }
    }
}

} // namespace

RankDeficient::RankDeficient(std::size_t column, double residual_norm,
                             double tolerance)
    : std::runtime_error(rank_message(column, residual_norm, tolerance)),
      column_(column), residual_(residual_norm), tolerance_(tolerance) {}

double rank_tolerance(std::size_t n, std::size_t columns) {
    return 1e-12 * std::sqrt(static_cast<double>(n)) *
           static_cast<double>(columns);
}

ComplexMatrix gram_schmidt_columns(const ComplexMatrix &g, std::size_t m) {
    if (g.empty()) {
        throw std::invalid_argument("gram_schmidt_columns: empty matrix");
    }
    if (m == 0 || m > g.cols() || m > g.rows()) {
        throw DimensionMismatch(
            "gram_schmidt_columns: need 1 <= m <= min(rows, cols), got m=" +
            std::to_string(m));
    }
    const std::size_t n = g.rows();
    const double tol = rank_tolerance(n, m);
    ComplexMatrix u(n, m);
    std::vector<Complex> r(n);

    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = g(i, j);
        }
        if (j > 0) {
            const double before = std::sqrt(norm2(r));
            project_out(u, j, r);
            if (std::sqrt(norm2(r)) < before / std::numbers::sqrt2) {
                project_out(u, j, r);
            }
        }
        const double length = std::sqrt(norm2(r));
        if (!(length >= tol)) {
            throw RankDeficient(j, length, tol);
        }
        const double inv = 1.0 / length;
        for (std::size_t i = 0; i < n; ++i) {
            u(i, j) = r[i] * inv;
        }
    }
    return u;
}

CoupledSample sample_coupled(RandomStream &stream, std::size_t n,
                             std::size_t k) {
    if (k == 0 || k > n) {
        throw std::invalid_argument("sample_coupled: need 1 <= k <= n");
    }
    CoupledSample s;
    s.n = n;
    s.k = k;
    s.gaussian = sample_gaussian_matrix(stream, n, k);
    s.unitary = gram_schmidt_columns(s.gaussian, k);
    return s;
}

ComplexMatrix sample_haar_unitary(RandomStream &stream, std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("sample_haar_unitary: n must be positive");
    }
    return sample_coupled(stream, n, n).unitary;
}

std::vector<Complex> sample_sphere_marginal(RandomStream &stream,
                                            std::size_t n, std::size_t k) {
    if (k == 0 || k > n) {
        throw std::invalid_argument("sample_sphere_marginal: need 1 <= k <= n");
    }
    std::vector<Complex> g(n);
    for (Complex &z : g) {
        z = sample_std_complex_gaussian(stream);
    }
    const double length = std::sqrt(norm2(g));
    const double tol = rank_tolerance(n, 1);
    if (!(length >= tol)) {
        throw RankDeficient(0, length, tol);
    }
    const double scale = std::sqrt(static_cast<double>(n)) / length;
    std::vector<Complex> out(g.begin(),
                             g.begin() + static_cast<std::ptrdiff_t>(k));
    for (Complex &z : out) {
        z *= scale;
    }
    return out;
}

} // namespace haarlab
