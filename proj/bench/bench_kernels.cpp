#include <benchmark/benchmark.h>

#include "csd/evolution.hpp"
#include "csd/kernels.hpp"
#include "csd/random_data.hpp"

// Serial reference vs OpenMP kernel comparison. Run with
//   CSD_THREADS/OMP_NUM_THREADS controlling the parallel side.

using namespace csd;

namespace {

ScalarField random_field(int n) {
    lab::RandomDataSpec spec{Grid(n, 2.0 * pi), 0.3, false, 0.0, 1.0, n / 3.0};
    return lab::random_scalar(spec, 42);
}

void bm_fft_serial(benchmark::State& state) {
    const int n = int(state.range(0));
    ScalarField f = random_field(n);
    for (auto _ : state) {
        fft::ref::fft(f.values(), n);
        fft::ref::ifft(f.values(), n);
        benchmark::ClobberMemory();
    }
}

void bm_fft_omp(benchmark::State& state) {
    const int n = int(state.range(0));
    ScalarField f = random_field(n);
    for (auto _ : state) {
        fft::fft(f.values(), n);
        fft::ifft(f.values(), n);
        benchmark::ClobberMemory();
    }
}

void bm_cmul_serial(benchmark::State& state) {
    const int n = int(state.range(0));
    ScalarField f = random_field(n);
    const auto t = spectral::frac_deriv_table(f.grid(), 0.5);
    for (auto _ : state) {
        kernels::ref::cmul(f.values(), t);
        benchmark::ClobberMemory();
    }
}

void bm_cmul_omp(benchmark::State& state) {
    const int n = int(state.range(0));
    ScalarField f = random_field(n);
    const auto t = spectral::frac_deriv_table(f.grid(), 0.5);
    for (auto _ : state) {
        kernels::cmul(f.values(), t);
        benchmark::ClobberMemory();
    }
}

void bm_currents_serial(benchmark::State& state) {
    const int n = int(state.range(0));
    lab::RandomDataSpec spec{Grid(n, 2.0 * pi), 0.3, false, 0.0, 1.0, n / 3.0};
    SpinorField psi = lab::random_spinor(spec, 7);
    ScalarField b0(psi.grid()), b1(psi.grid()), b2(psi.grid());
    for (auto _ : state) {
        kernels::ref::gamma_bilinears(b0.values(), b1.values(), b2.values(), psi.comp(0).values(),
                                      psi.comp(1).values(), psi.comp(0).values(),
                                      psi.comp(1).values());
        benchmark::ClobberMemory();
    }
}

void bm_currents_omp(benchmark::State& state) {
    const int n = int(state.range(0));
    lab::RandomDataSpec spec{Grid(n, 2.0 * pi), 0.3, false, 0.0, 1.0, n / 3.0};
    SpinorField psi = lab::random_spinor(spec, 7);
    ScalarField b0(psi.grid()), b1(psi.grid()), b2(psi.grid());
    for (auto _ : state) {
        kernels::gamma_bilinears(b0.values(), b1.values(), b2.values(), psi.comp(0).values(),
                                 psi.comp(1).values(), psi.comp(0).values(), psi.comp(1).values());
        benchmark::ClobberMemory();
    }
}

void bm_sum_serial(benchmark::State& state) {
    ScalarField f = random_field(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::ref::sum_abs2(f.values()));
}

void bm_sum_omp(benchmark::State& state) {
    ScalarField f = random_field(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(kernels::sum_abs2(f.values()));
}

void bm_rhs(benchmark::State& state) {
    const int n = int(state.range(0));
    lab::RandomDataSpec spec{Grid(n, 2.0 * pi), 0.3, false, 0.0, 1.0, n / 3.0};
    SpinorField psi = lab::random_spinor(spec, 7);
    for (auto _ : state) benchmark::DoNotOptimize(evolve::rhs(psi, 1.0));
}

void bm_step(benchmark::State& state) {
    const int n = int(state.range(0));
    lab::RandomDataSpec spec{Grid(n, 2.0 * pi), 0.3, false, 0.0, 1.0, n / 3.0};
    SpinorField psi = lab::random_spinor(spec, 7);
    evolve::Stepper st(psi.grid(), 1e-3, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(st.step(psi, 0.0));
}

}  // namespace

BENCHMARK(bm_fft_serial)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_fft_omp)->Arg(128)->Arg(256)->Arg(512);
BENCHMARK(bm_cmul_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_cmul_omp)->Arg(256)->Arg(512);
BENCHMARK(bm_currents_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_currents_omp)->Arg(256)->Arg(512);
BENCHMARK(bm_sum_serial)->Arg(256)->Arg(512);
BENCHMARK(bm_sum_omp)->Arg(256)->Arg(512);
BENCHMARK(bm_rhs)->Arg(128)->Arg(256);
BENCHMARK(bm_step)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
