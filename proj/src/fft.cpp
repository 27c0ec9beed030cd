#include "csd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "csd/kernels.hpp"

namespace csd::fft {

namespace {

struct PlanSet {
    fftw_plan row_f = nullptr, row_b = nullptr;
    fftw_plan twod_f = nullptr, twod_b = nullptr;
};

std::mutex plan_mutex;  // FFTW planning is not thread-safe; execution is.
std::map<int, PlanSet>& plan_cache() {
    static std::map<int, PlanSet> cache;
    return cache;
}

const PlanSet& plans_for(int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plan_cache().find(n);
    if (it != plan_cache().end()) return it->second;

    aligned_vector<cplx> scratch(std::size_t(n) * n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());

    PlanSet ps;
    ps.row_f = fftw_plan_dft_1d(n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    ps.row_b = fftw_plan_dft_1d(n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
    ps.twod_f = fftw_plan_dft_2d(n, n, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    ps.twod_b = fftw_plan_dft_2d(n, n, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);

    auto [pos, ok] = plan_cache().emplace(n, ps);
    (void)ok;
    return pos->second;
}

// Blocked in-place square transpose (exact data movement, thread-count stable).
void transpose(cplx* a, int n) {
    constexpr int bs = 32;
#pragma omp parallel for schedule(static)
    for (int bi = 0; bi < n; bi += bs) {
        for (int bj = bi; bj < n; bj += bs) {
            const int ihi = std::min(bi + bs, n), jhi = std::min(bj + bs, n);
            if (bi == bj) {
                for (int i = bi; i < ihi; ++i)
                    for (int j = i + 1; j < jhi; ++j)
                        std::swap(a[std::size_t(i) * n + j], a[std::size_t(j) * n + i]);
            } else {
                for (int i = bi; i < ihi; ++i)
                    for (int j = bj; j < jhi; ++j)
                        std::swap(a[std::size_t(i) * n + j], a[std::size_t(j) * n + i]);
            }
        }
    }
}

// Row FFTs, transpose, row FFTs, transpose back: every 1D transform is the
// same fixed serial plan, so the result is bit-identical for any thread count.
void transform(std::span<cplx> buf, int n, bool forward) {
    const PlanSet& ps = plans_for(n);
    const fftw_plan row = forward ? ps.row_f : ps.row_b;
    auto* base = reinterpret_cast<fftw_complex*>(buf.data());
    auto rows = [&] {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < n; ++r)
            fftw_execute_dft(row, base + std::size_t(r) * n, base + std::size_t(r) * n);
    };
    rows();
    transpose(buf.data(), n);
    rows();
    transpose(buf.data(), n);
}

}  // namespace

void fft(std::span<cplx> buf, int n) { transform(buf, n, true); }

void ifft(std::span<cplx> buf, int n) {
    transform(buf, n, false);
    kernels::scale(buf, 1.0 / (double(n) * n));
}

namespace ref {

void fft(std::span<cplx> buf, int n) {
    const PlanSet& ps = plans_for(n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(ps.twod_f, p, p);
}

void ifft(std::span<cplx> buf, int n) {
    const PlanSet& ps = plans_for(n);
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(ps.twod_b, p, p);
    const double s = 1.0 / (double(n) * n);
    for (auto& v : buf) v *= s;
}

}  // namespace ref

void warmup(int n) { plans_for(n); }

}  // namespace csd::fft
