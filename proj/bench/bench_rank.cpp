#include <random>

#include <benchmark/benchmark.h>

#include "tateshift/cp_rep.hpp"
#include "tateshift/linalg.hpp"

namespace {

tss::Matrix random_matrix(std::size_t rows, std::size_t cols, tss::Fp p, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_int_distribution<tss::Fp> dist(0, p - 1);
    tss::Matrix m(rows, cols, p);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = dist(rng);
    return m;
}

void BM_RankSerial(benchmark::State& state)
{
    const auto m = random_matrix(std::size_t(state.range(0)), std::size_t(state.range(0)), 5, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(tss::serial::rank(m));
}

void BM_RankOmp(benchmark::State& state)
{
    const auto m = random_matrix(std::size_t(state.range(0)), std::size_t(state.range(0)), 5, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(tss::omp::rank(m));
}

// The augmentation map of a symmetric power: the matrices the library actually reduces.
void augmentation_case(benchmark::State& state, bool parallel)
{
    const tss::HeightParams params(5);
    tss::SymmetricAlgebra alg(tss::u_k_module(params, 1));
    const tss::Matrix a = alg.power(unsigned(state.range(0))).augmentation();
    for (auto _ : state)
        benchmark::DoNotOptimize(parallel ? tss::omp::rank(a) : tss::serial::rank(a));
    state.counters["dim"] = double(a.rows());
}

void BM_AugmentationSerial(benchmark::State& state) { augmentation_case(state, false); }
void BM_AugmentationOmp(benchmark::State& state) { augmentation_case(state, true); }

}  // namespace

BENCHMARK(BM_RankSerial)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankOmp)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AugmentationSerial)->Arg(10)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AugmentationOmp)->Arg(10)->Arg(15)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
