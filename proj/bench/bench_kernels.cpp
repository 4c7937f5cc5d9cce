#include "buchi/chain.hpp"
#include "buchi/dense.hpp"
#include "buchi/generator.hpp"
#include "buchi/kernels.hpp"
#include "buchi/oracles.hpp"
#include "buchi/rng.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace buchi;

Matrix random_system(std::size_t n) {
    CounterRng rng(42, n);
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += a(i, j) = rng.uniform();
        for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - 0.9 * a(i, j) / sum;
    }
    return a;
}

template <Backend B>
void lu(benchmark::State& state) {
    const Matrix a = random_system(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lu_decompose(a, B));
}

template <Backend B>
void matvec(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix a = random_system(n);
    const Vector x(n, 1.0);
    Vector y(n);
    for (auto _ : state) {
        kernels::matvec(B, a, x, y);
        benchmark::DoNotOptimize(y.data());
    }
}

template <Backend B>
void mc(benchmark::State& state) {
    ChainSpec spec;
    spec.states = 20;
    spec.rejecting_bsccs = 2;
    spec.seed = 3;
    const auto g = generate_chain(spec);
    const InducedChain chain = induce_chain(g.model, g.policy);
    const BsccPartition p = decompose(chain);
    const SurrogateReward r(1.0, 0.9);
    for (auto _ : state)
        benchmark::DoNotOptimize(mc_return(chain, p, r, chain.initial, 100000, 7, EstimatorMode{}, B));
}

} // namespace

BENCHMARK(lu<Backend::serial>)->Arg(256)->Arg(1024);
BENCHMARK(lu<Backend::omp>)->Arg(256)->Arg(1024);
BENCHMARK(matvec<Backend::serial>)->Arg(1024)->Arg(2048);
BENCHMARK(matvec<Backend::omp>)->Arg(1024)->Arg(2048);
BENCHMARK(mc<Backend::serial>);
BENCHMARK(mc<Backend::omp>);

BENCHMARK_MAIN();
