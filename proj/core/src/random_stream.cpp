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

#include "haarlab/random_stream.hpp"

#include <cmath>
#include <numbers>
#include <utility>

namespace haarlab {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kLaneHi = 0x243f6a8885a308d3ULL;
constexpr std::uint64_t kLaneLo = 0x13198a2e03707344ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

// One absorption step of the path hash. Order-sensitive: absorbing 1 then 2
// differs from 2 then 1.
constexpr std::uint64_t absorb(std::uint64_t key, std::uint64_t label,
                               std::uint64_t lane) noexcept {
    return mix64(rotl(key, 23) ^ mix64(label + lane) ^ lane) + kGolden;
}

} // namespace

RandomStream::RandomStream(std::uint64_t master_seed)
    : RandomStream(master_seed, {}, mix64(master_seed ^ kLaneHi),
                   mix64(master_seed + kLaneLo)) {}

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path,
                           std::uint64_t key_hi, std::uint64_t key_lo)
    : seed_(seed), path_(std::move(path)), key_hi_(key_hi), key_lo_(key_lo) {
    reseed();
}

void RandomStream::reseed() noexcept {
    // SplitMix64 expansion of the 128-bit key into the 256-bit state.
    std::uint64_t s = key_hi_;
    for (std::size_t i = 0; i < 4; ++i) {
        s += kGolden;
        state_[i] = mix64(s ^ (i % 2 == 0 ? key_lo_ : rotl(key_lo_, 32)));
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = kGolden;
    }
}

RandomStream::result_type RandomStream::operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RandomStream::uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_positive() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

RandomStream derive_stream(const RandomStream &parent, std::uint64_t label) {
    std::vector<std::uint64_t> path = parent.path_;
    path.push_back(label);
    return RandomStream(parent.seed_, std::move(path),
                        absorb(parent.key_hi_, label, kLaneHi),
                        absorb(parent.key_lo_, label, kLaneLo));
}

Complex sample_std_complex_gaussian(RandomStream &stream) {
    // sqrt(-2 ln u) cos(2 pi v) is N(0, 1); dropping the factor 2 gives the
    // N(0, 1/2) components, and |G|^2 = -ln u is exactly Exponential(1).
    const double radius = std::sqrt(-std::log(stream.uniform_positive()));
    const double angle = 2.0 * std::numbers::pi * stream.uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

ComplexMatrix sample_gaussian_matrix(RandomStream &stream, std::size_t rows,
                                     std::size_t cols) {
    ComplexMatrix g(rows, cols);
    for (Complex &z : g.data()) {
        z = sample_std_complex_gaussian(stream);
    }
    return g;
}

double sample_exponential(RandomStream &stream) {
    return -std::log(stream.uniform_positive());
}

} // namespace haarlab
