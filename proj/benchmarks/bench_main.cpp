#include <benchmark/benchmark.h>

#include <random>

#include "ncpot/analysis.hpp"
#include "ncpot/linalg.hpp"
#include "ncpot/measures.hpp"
#include "ncpot/reconstruction.hpp"
#include "ncpot/simulator.hpp"
#include "ncpot/wigner.hpp"

using namespace ncpot;

namespace {

ComplexMatrix random_hermitian(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    ComplexMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Complex v = i == j ? Complex(g(rng)) : Complex(g(rng), g(rng));
            m(i, j) = v;
            m(j, i) = std::conj(v);
        }
    return m;
}

}  // namespace

static void BM_HermitianEigensystem(benchmark::State& state) {
    const auto m = random_hermitian(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::hermitian_eigensystem(m));
}
BENCHMARK(BM_HermitianEigensystem)->Arg(2)->Arg(4)->Arg(9)->Arg(16);

static void BM_MeasureTriple(benchmark::State& state) {
    const auto rho = analysis::rho_qr(0.7, 0.3, 0.6, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(measures::measure_triple(rho));
}
BENCHMARK(BM_MeasureTriple);

static void BM_WignerGrid(benchmark::State& state) {
    const auto rho = states::vops_state({0.6, 0.4});
    for (auto _ : state) benchmark::DoNotOptimize(wigner::wigner_function(rho));
}
BENCHMARK(BM_WignerGrid)->Unit(benchmark::kMillisecond);

static void BM_SimulateAndReconstruct(benchmark::State& state) {
    const simulator::DetectorModel det;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        const auto sched = simulator::simulate_schedule({0.5, 0.4}, BeamSplitter::balanced(), det, ++seed);
        benchmark::DoNotOptimize(reconstruction::reconstruct(sched.records));
    }
}
BENCHMARK(BM_SimulateAndReconstruct)->Unit(benchmark::kMillisecond);

static void BM_Fit(benchmark::State& state) {
    const auto target = analysis::rho_qr(0.7, 0.3, 0.6, 0.1);
    for (auto _ : state) benchmark::DoNotOptimize(analysis::fit_rho_qr(target));
}
BENCHMARK(BM_Fit)->Unit(benchmark::kMillisecond);

static void BM_Sweep(benchmark::State& state) {
    const auto a = analysis::rho_qr(0.9, 0.2, 0.5, 0.1), b = analysis::rho_qr(0.85, 0.1, 0.8, 0.4);
    for (auto _ : state) benchmark::DoNotOptimize(analysis::sweep_interpolation(a, b));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
