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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "haarlab/dist_tests.hpp"
#include "haarlab/haar_sampler.hpp"
#include "haarlab/random_stream.hpp"
#include "oracles.hpp"

using namespace haarlab;

namespace {

oracle::Matrix to_oracle(const ComplexMatrix &m) {
    oracle::Matrix out(m.rows(), std::vector<Complex>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[i][j] = m(i, j);
        }
    }
    return out;
}

} // namespace

TEST_CASE("Gram-Schmidt on small hand examples", "[haar]") {
    ComplexMatrix g(2, 2);
    g(0, 0) = 1.0;
    g(0, 1) = 1.0;
    g(1, 1) = 1.0;
    CHECK(gram_schmidt_columns(g, 2) == ComplexMatrix::identity(2));

    // Normalization keeps the phase of the first column.
    ComplexMatrix h(2, 1);
    h(0, 0) = Complex(0.0, 3.0);
    const ComplexMatrix u = gram_schmidt_columns(h, 1);
    CHECK(u(0, 0) == Complex(0.0, 1.0));
    CHECK(u(1, 0) == Complex(0.0, 0.0));

    // Only the requested columns are produced.
    ComplexMatrix wide(3, 3);
    wide(0, 0) = 2.0;
    CHECK(gram_schmidt_columns(wide, 1).cols() == 1);
    CHECK_THROWS_AS(gram_schmidt_columns(wide, 4), DimensionMismatch);
    CHECK_THROWS_AS(gram_schmidt_columns(wide, 0), DimensionMismatch);
}

TEST_CASE("dependent columns raise RankDeficient", "[haar]") {
    ComplexMatrix g(4, 2);
    for (std::size_t i = 0; i < 4; ++i) {
        g(i, 0) = Complex(1.0 + i, -0.5);
        g(i, 1) = Complex(0.0, 2.0) * g(i, 0);
    }
    try {
        (void)gram_schmidt_columns(g, 2);
        FAIL("expected RankDeficient");
    } catch (const RankDeficient &e) {
        CHECK(e.column() == 1);
        CHECK(e.residual_norm() < e.tolerance());
    }
    CHECK_THROWS_AS(gram_schmidt_columns(ComplexMatrix(3, 1), 1), RankDeficient);
    CHECK_THAT(rank_tolerance(100, 4), Catch::Matchers::WithinRel(4e-11, 1e-12));
}

TEST_CASE("coupled samples are orthonormal and triangular", "[haar][property]") {
    const RandomStream root(606);
    for (const std::size_t n : {2u, 8u, 64u, 256u, 1000u}) {
        const std::size_t k = std::min<std::size_t>(n, 4);
        for (std::size_t t = 0; t < 20; ++t) {
            RandomStream s = derive_stream(derive_stream(root, n), t);
            const CoupledSample cs = sample_coupled(s, n, k);
            REQUIRE(cs.unitary.rows() == n);
            REQUIRE(cs.unitary.cols() == k);
            CHECK(orthonormality_error(cs.unitary) <= 1e-12);
            // G = U T with T upper triangular and positive diagonal.
            for (std::size_t j = 0; j < k; ++j) {
                const double scale = std::sqrt(column_norm2(cs.gaussian, j));
                const Complex d = column_inner(cs.unitary, j, cs.gaussian, j);
                CHECK(d.real() > 0.0);
                CHECK(std::abs(d.imag()) <= 1e-12 * scale);
                for (std::size_t l = j + 1; l < k; ++l) {
                    CHECK(std::abs(column_inner(cs.unitary, l, cs.gaussian, j)) <=
                          1e-12 * scale);
                }
            }
        }
    }
}

TEST_CASE("column j of U depends only on the first j columns of G",
          "[haar][property]") {
    const RandomStream root(707);
    for (std::size_t t = 0; t < 10; ++t) {
        RandomStream s = derive_stream(root, t);
        const ComplexMatrix g = sample_gaussian_matrix(s, 300, 5);
        const ComplexMatrix full = gram_schmidt_columns(g, 5);
        for (std::size_t j = 1; j <= 5; ++j) {
            const ComplexMatrix part = gram_schmidt_columns(g.top_left(300, j), j);
            CHECK(part == full.top_left(300, j));
        }
    }
}

TEST_CASE("Gram-Schmidt agrees with an extended-precision classical oracle",
          "[haar]") {
    const RandomStream root(808);
    for (std::size_t t = 0; t < 10; ++t) {
        RandomStream s = derive_stream(root, t);
        const ComplexMatrix g = sample_gaussian_matrix(s, 200, 6);
        const ComplexMatrix u = gram_schmidt_columns(g, 6);
        const oracle::Matrix ref = oracle::classical_gram_schmidt(to_oracle(g), 6);
        double worst = 0.0;
        for (std::size_t i = 0; i < 200; ++i) {
            for (std::size_t j = 0; j < 6; ++j) {
                worst = std::max(worst, std::abs(u(i, j) - ref[i][j]));
            }
        }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("nearly dependent columns stay orthonormal", "[haar]") {
    RandomStream s(909);
    ComplexMatrix g = sample_gaussian_matrix(s, 50, 3);
    for (std::size_t i = 0; i < 50; ++i) {
        g(i, 2) = g(i, 0) + 1e-9 * g(i, 2);
    }
    CHECK(orthonormality_error(gram_schmidt_columns(g, 3)) < 1e-12);
}

TEST_CASE("full Haar unitaries have unit-modulus determinant", "[haar]") {
    const RandomStream root(1001);
    for (std::size_t t = 0; t < 20; ++t) {
        RandomStream s = derive_stream(root, t);
        const ComplexMatrix u = sample_haar_unitary(s, 8);
        CHECK(std::abs(std::abs(oracle::lu_determinant(to_oracle(u))) - 1.0) < 1e-12);
        CHECK(orthonormality_error(adjoint(u)) < 1e-12);
    }
}

TEST_CASE("corner moments match exact Haar values and a Householder oracle",
          "[haar][statistics]") {
    constexpr std::size_t n = 32;
    constexpr std::size_t trials = 20000;
    const RandomStream root(1102);
    std::mt19937_64 rng(1102);
    std::vector<double> ours(trials);
    std::vector<double> ours4(trials);
    std::vector<double> theirs(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        RandomStream s = derive_stream(root, t);
        const CoupledSample cs = sample_coupled(s, n, 2);
        ours[t] = n * std::norm(cs.unitary(0, 0));
        ours4[t] = ours[t] * ours[t];
        theirs[t] = n * std::norm(oracle::householder_haar(rng, n)[0][0]);
    }
    // n E|U_11|^2 = 1 and n^2 E|U_11|^4 = 2n/(n+1) for Haar unitaries.
    CHECK(std::abs(oracle::mean(ours) - 1.0) < 5.0 * oracle::standard_error(ours));
    CHECK(std::abs(oracle::mean(theirs) - 1.0) <
          5.0 * oracle::standard_error(theirs));
    const double fourth = 2.0 * n / (n + 1.0);
    CHECK(std::abs(oracle::mean(ours4) - fourth) <
          5.0 * oracle::standard_error(ours4));
    CHECK(ks_two_sample(ours, theirs, 0.01).pass);
}

TEST_CASE("sphere marginal is the scaled head of a uniform unit vector",
          "[haar]") {
    RandomStream a(55);
    RandomStream b(55);
    const std::vector<Complex> x = sample_sphere_marginal(a, 16, 16);
    CHECK(std::abs(norm2(x) - 16.0) < 1e-12);
    const std::vector<Complex> head = sample_sphere_marginal(b, 16, 3);
    REQUIRE(head.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(head[i] == x[i]);
    }
    CHECK_THROWS_AS(sample_sphere_marginal(a, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(sample_coupled(a, 4, 5), std::invalid_argument);
    CHECK_THROWS_AS(sample_coupled(a, 4, 0), std::invalid_argument);
}

TEST_CASE("sampling is reproducible", "[haar]") {
    RandomStream a(12);
    RandomStream b(12);
    const CoupledSample x = sample_coupled(a, 40, 3);
    const CoupledSample y = sample_coupled(b, 40, 3);
    CHECK(x.gaussian == y.gaussian);
    CHECK(x.unitary == y.unitary);
}
