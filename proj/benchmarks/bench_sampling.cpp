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


#include <benchmark/benchmark.h>

#include <vector>

#include "haarlab/gap_measures.hpp"
#include "haarlab/haar_sampler.hpp"
#include "haarlab/limit_analysis.hpp"
#include "haarlab/random_stream.hpp"

namespace {

using namespace haarlab;

void BM_GaussianPanel(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream stream(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_gaussian_matrix(stream, n, 4));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * 4);
}
BENCHMARK(BM_GaussianPanel)->RangeMultiplier(8)->Range(64, 1 << 18);

void BM_GramSchmidtPanel(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto k = static_cast<std::size_t>(state.range(1));
    RandomStream stream(2);
    const ComplexMatrix g = sample_gaussian_matrix(stream, n, k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gram_schmidt_columns(g, k));
    }
}
BENCHMARK(BM_GramSchmidtPanel)
    ->Args({1024, 2})
    ->Args({1024, 16})
    ->Args({1 << 17, 2})
    ->Args({1 << 17, 8});

void BM_FullHaar(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    RandomStream stream(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_haar_unitary(stream, n));
    }
}
BENCHMARK(BM_FullHaar)->RangeMultiplier(2)->Range(16, 256);

void BM_Certificate(benchmark::State &state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const ConstantLedger ledger = build_constant_ledger(1, 0.04, 0.5);
    RandomStream stream(4);
    const ComplexMatrix g = sample_gaussian_matrix(stream, n, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_certificate(g, ledger));
    }
}
BENCHMARK(BM_Certificate)->Arg(2000)->Arg(1 << 16);

void BM_SampleGap(benchmark::State &state) {
    const std::vector<double> weights{0.4, 0.3, 0.2, 0.1};
    const DensityMatrix rho = make_density_matrix(weights);
    RandomStream stream(5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_gap(rho, stream));
    }
}
BENCHMARK(BM_SampleGap);

} // namespace

BENCHMARK_MAIN();
