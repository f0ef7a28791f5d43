// Copyright (c) acra-tools contributors.
// SPDX-License-Identifier: Apache-2.0
//
// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"

namespace {

using namespace acra;
using namespace acra::testing;

void BM_BoundedEquiv(benchmark::State& state) {
    const Acra a = m4();
    const Acra b = m5();
    const int len = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bounded_equiv(a, b, len));
    }
}

void BM_BoundedEquivSerial(benchmark::State& state) {
    const Acra a = m4();
    const Acra b = m5();
    const int len = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bounded_equiv_serial(a, b, len));
    }
}

AcraGame bench_game() {
    std::mt19937 rng(7);
    return random_game(rng, 3, 2, 2);
}

void BM_ClampedProduct(benchmark::State& state) {
    const AcraGame g = bench_game();
    for (auto _ : state) {
        benchmark::DoNotOptimize(clamped_product(g, static_cast<int>(state.range(0))));
    }
}

void BM_ClampedProductSerial(benchmark::State& state) {
    const AcraGame g = bench_game();
    for (auto _ : state) {
        benchmark::DoNotOptimize(clamped_product_serial(g, static_cast<int>(state.range(0))));
    }
}

} // namespace

BENCHMARK(BM_BoundedEquiv)->Arg(10)->Arg(14);
BENCHMARK(BM_BoundedEquivSerial)->Arg(10)->Arg(14);
BENCHMARK(BM_ClampedProduct)->Arg(16)->Arg(64);
BENCHMARK(BM_ClampedProductSerial)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
