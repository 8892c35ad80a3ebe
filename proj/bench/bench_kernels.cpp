// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <vector>

#include "walshcs/cob_operator.hpp"
#include "walshcs/kernels.hpp"
#include "walshcs/rng.hpp"

using namespace walshcs;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return v;
}

// Square matrix with `per_row` entries per row at sorted random columns.
CsrMatrix random_csr(std::size_t n, std::size_t per_row, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CsrMatrix a;
    a.cols = n;
    std::vector<std::uint32_t> cols(per_row);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& c : cols) c = static_cast<std::uint32_t>(rng.bounded(n));
        std::sort(cols.begin(), cols.end());
        for (auto c : cols) a.push(c, rng.normal());
        a.end_row();
    }
    return a;
}

template <void (*F)(std::span<double>)>
void BM_fwht(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto src = random_vector(n, 1);
    std::vector<double> v(n);
    for (auto _ : state) {
        v = src;
        F(v);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

template <void (*F)(const CsrMatrix&, std::span<const double>, std::span<double>)>
void BM_spmv(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const CsrMatrix a = random_csr(n, 16, 2);
    const auto x = random_vector(n, 3);
    std::vector<double> y(n);
    for (auto _ : state) {
        F(a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.nnz()));
}

using FillFn = void (*)(double*, std::size_t, std::size_t, const std::function<std::vector<double>(std::size_t)>&);

// Column generation as done for operator sections: one Walsh column per call.
template <FillFn F>
void BM_fill_columns(benchmark::State& state) {
    const CobOperator op(WaveletBasis(4, 3), LevelStructure::make(3, 5, 1), static_cast<int>(state.range(0)));
    const std::size_t rows = op.grid_size(), cols = 256;
    std::vector<double> data(rows * cols);
    for (auto _ : state) {
        F(data.data(), rows, cols, [&](std::size_t j) { return op.column(j); });
        benchmark::DoNotOptimize(data.data());
    }
}

}  // namespace

BENCHMARK(BM_fwht<kernels::serial::fwht>)->Name("fwht/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_fwht<kernels::parallel::fwht>)->Name("fwht/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 20);
BENCHMARK(BM_spmv<kernels::serial::spmv>)->Name("spmv/serial")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_spmv<kernels::parallel::spmv>)->Name("spmv/parallel")->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_fill_columns<kernels::serial::fill_columns>)->Name("fill_columns/serial")->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fill_columns<kernels::parallel::fill_columns>)->Name("fill_columns/parallel")->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
