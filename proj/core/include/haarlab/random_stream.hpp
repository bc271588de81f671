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

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "haarlab/complex_matrix.hpp"

namespace haarlab {

/**
 * Deterministic, splittable random source.
 *
 * A stream is identified by its origin: a 64-bit master seed and a path of
 * 64-bit labels. Two streams with the same origin produce the same output.
 * The origin is hashed into a 128-bit key that seeds a xoshiro256**
 * generator (period 2^256 - 1); deriving a child hashes one more label into
 * the key and never touches the parent's generator state.
 *
 * Streams are single-owner. Fan out with derive_stream() for parallel work.
 */
class RandomStream {
  public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t master_seed);

    [[nodiscard]] std::uint64_t master_seed() const noexcept { return seed_; }
    [[nodiscard]] std::span<const std::uint64_t> path() const noexcept {
        return path_;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1]; safe as a logarithm argument.
    double uniform_positive() noexcept;

    friend RandomStream derive_stream(const RandomStream &parent,
                                      std::uint64_t label);

  private:
    RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path,
                 std::uint64_t key_hi, std::uint64_t key_lo);
    void reseed() noexcept;

    std::uint64_t seed_;
    std::vector<std::uint64_t> path_;
    std::uint64_t key_hi_;
    std::uint64_t key_lo_;
    std::array<std::uint64_t, 4> state_{};
};

/// Child stream with path = parent path + [label]. Does not advance parent.
[[nodiscard]] RandomStream derive_stream(const RandomStream &parent,
                                         std::uint64_t label);

/// X + iY with X, Y independent N(0, 1/2), so E|G|^2 = 1 (Box-Muller).
[[nodiscard]] Complex sample_std_complex_gaussian(RandomStream &stream);

/// rows x cols panel of i.i.d. standard complex Gaussians, filled row-major.
[[nodiscard]] ComplexMatrix sample_gaussian_matrix(RandomStream &stream,
                                                   std::size_t rows,
                                                   std::size_t cols);

/// Exponential(1) variate.
[[nodiscard]] double sample_exponential(RandomStream &stream);

} // namespace haarlab
