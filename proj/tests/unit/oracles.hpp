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

// Reference implementations used only by the tests. They share no code with
// the library: a different generator, a different orthogonalization and
// plain textbook formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Matrix = std::vector<std::vector<C>>; // m[i][j]

/// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)> &f, double a,
                      double b, std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) {
        s += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return s * h / 3.0;
}

/// Standard complex Gaussian from the standard library's normal distribution.
inline C std_complex_gaussian(std::mt19937_64 &rng) {
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    const double re = half(rng);
    const double im = half(rng);
    return {re, im};
}

/// Haar unitary from Householder QR of a Gaussian matrix, with the phases
/// of R's diagonal moved into Q.
inline Matrix householder_haar(std::mt19937_64 &rng, std::size_t n) {
    Matrix a(n, std::vector<C>(n));
    for (auto &row : a) {
        for (C &z : row) {
            z = std_complex_gaussian(rng);
        }
    }
    Matrix q(n, std::vector<C>(n));
    for (std::size_t i = 0; i < n; ++i) {
        q[i][i] = 1.0;
    }
    std::vector<C> diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            norm += std::norm(a[i][k]);
        }
        norm = std::sqrt(norm);
        const C x0 = a[k][k];
        const C phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : C(1.0);
        const C alpha = -phase * norm;
        std::vector<C> v(n);
        v[k] = x0 - alpha;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a[i][k];
        }
        double vn = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            vn += std::norm(v[i]);
        }
        if (vn > 0.0) {
            // A <- (I - 2vv^+/|v|^2) A, Q <- Q (I - 2vv^+/|v|^2)
            for (std::size_t j = 0; j < n; ++j) {
                C s = 0.0;
                for (std::size_t i = k; i < n; ++i) {
                    s += std::conj(v[i]) * a[i][j];
                }
                s *= 2.0 / vn;
                for (std::size_t i = k; i < n; ++i) {
                    a[i][j] -= s * v[i];
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                C s = 0.0;
                for (std::size_t r = k; r < n; ++r) {
                    s += q[i][r] * v[r];
                }
                s *= 2.0 / vn;
                for (std::size_t r = k; r < n; ++r) {
                    q[i][r] -= s * std::conj(v[r]);
                }
            }
        }
        diag[k] = a[k][k];
    }
    for (std::size_t j = 0; j < n; ++j) {
        const C ph = diag[j] / std::abs(diag[j]);
        for (std::size_t i = 0; i < n; ++i) {
            q[i][j] *= ph;
        }
    }
    return q;
}

/// Determinant by LU decomposition with partial pivoting.
inline C lu_determinant(Matrix a) {
    const std::size_t n = a.size();
    C det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a[i][k]) > std::abs(a[p][k])) {
                p = i;
            }
        }
        if (p != k) {
            std::swap(a[p], a[k]);
            det = -det;
        }
        if (a[k][k] == C(0.0)) {
            return 0.0;
        }
        det *= a[k][k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const C f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    return det;
}

/// Classical Gram-Schmidt in long double on the first m columns.
inline Matrix classical_gram_schmidt(const Matrix &g, std::size_t m) {
    using L = std::complex<long double>;
    const std::size_t n = g.size();
    std::vector<std::vector<L>> u(m, std::vector<L>(n));
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<L> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = L(g[i][j].real(), g[i][j].imag());
        }
        std::vector<L> coef(j);
        for (std::size_t l = 0; l < j; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                coef[l] += std::conj(u[l][i]) * r[i];
            }
        }
        for (std::size_t l = 0; l < j; ++l) {
            for (std::size_t i = 0; i < n; ++i) {
                r[i] -= coef[l] * u[l][i];
            }
        }
        long double norm = 0.0L;
        for (const L &z : r) {
            norm += std::norm(z);
        }
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) {
            u[j][i] = r[i] / norm;
        }
    }
    Matrix out(n, std::vector<C>(m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            out[i][j] = C(static_cast<double>(u[j][i].real()),
                          static_cast<double>(u[j][i].imag()));
        }
    }
    return out;
}

inline double mean(const std::vector<double> &x) {
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

/// Standard error of the sample mean.
inline double standard_error(const std::vector<double> &x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) {
        s += (v - m) * (v - m);
    }
    const double nd = static_cast<double>(x.size());
    return std::sqrt(s / (nd - 1.0) / nd);
}

/// Pearson correlation of two equally long samples.
inline double correlation(const std::vector<double> &a,
                          const std::vector<double> &b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace oracle
