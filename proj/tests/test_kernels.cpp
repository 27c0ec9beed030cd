#include <doctest.h>

#include <random>

#include "csd/fft.hpp"
#include "csd/kernels.hpp"

using namespace csd;

namespace {

aligned_vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    aligned_vector<cplx> v(n);
    for (auto& x : v) {
        const double re = double(rng() >> 11) * 0x1p-53 - 0.5;
        const double im = double(rng() >> 11) * 0x1p-53 - 0.5;
        x = cplx{re, im};
    }
    return v;
}

double max_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("pointwise kernels match the serial reference exactly") {
    const std::size_t n = 64 * 64;
    auto x = random_vec(n, 1);
    auto t = random_vec(n, 2);
    auto y = random_vec(n, 3);

    auto x1 = x, x2 = x;
    kernels::cmul(x1, t);
    kernels::ref::cmul(x2, t);
    CHECK(max_diff(x1, x2) == 0.0);

    auto y1 = y, y2 = y;
    kernels::axpy(y1, cplx{0.3, -0.7}, x);
    kernels::ref::axpy(y2, cplx{0.3, -0.7}, x);
    CHECK(max_diff(y1, y2) == 0.0);

    auto k1 = random_vec(n, 4), k2 = random_vec(n, 5), k3 = random_vec(n, 6), k4 = random_vec(n, 7);
    aligned_vector<cplx> o1(n), o2(n);
    kernels::rk4_update(o1, x, k1, k2, k3, k4, 0.1);
    kernels::ref::rk4_update(o2, x, k1, k2, k3, k4, 0.1);
    CHECK(max_diff(o1, o2) == 0.0);

    auto m00 = random_vec(n, 8), m01 = random_vec(n, 9), m10 = random_vec(n, 10),
         m11 = random_vec(n, 11);
    aligned_vector<cplx> a1(n), a2(n), b1(n), b2(n);
    kernels::apply_mat2(a1, b1, x, y, m00, m01, m10, m11);
    kernels::ref::apply_mat2(a2, b2, x, y, m00, m01, m10, m11);
    CHECK(max_diff(a1, a2) == 0.0);
    CHECK(max_diff(b1, b2) == 0.0);

    aligned_vector<cplx> c0a(n), c1a(n), c2a(n), c0b(n), c1b(n), c2b(n);
    kernels::gamma_bilinears(c0a, c1a, c2a, x, y, k1, k2);
    kernels::ref::gamma_bilinears(c0b, c1b, c2b, x, y, k1, k2);
    CHECK(max_diff(c0a, c0b) == 0.0);
    CHECK(max_diff(c1a, c1b) == 0.0);
    CHECK(max_diff(c2a, c2b) == 0.0);

    kernels::slash_apply(a1, b1, c0a, c1a, c2a, x, y);
    kernels::ref::slash_apply(a2, b2, c0a, c1a, c2a, x, y);
    CHECK(max_diff(a1, a2) == 0.0);
    CHECK(max_diff(b1, b2) == 0.0);
}

TEST_CASE("reductions agree with the serial reference to roundoff") {
    auto x = random_vec(100000, 42);
    const double s1 = kernels::sum_abs2(x);
    const double s2 = kernels::ref::sum_abs2(x);
    CHECK(std::abs(s1 - s2) <= 1e-12 * s2);
    CHECK(kernels::max_abs(x) == kernels::ref::max_abs(x));
}

TEST_CASE("blocked sums do not depend on the thread count") {
    auto x = random_vec(50000, 7);
    const double base = kernels::sum_abs2(x);
    // Same decomposition regardless of how many threads executed it: re-run a
    // few times (scheduling may differ) and require bit equality.
    for (int k = 0; k < 5; ++k) CHECK(kernels::sum_abs2(x) == base);
}

TEST_CASE("parallel fft matches the serial 2D reference") {
    for (int n : {8, 32, 128}) {
        auto x = random_vec(std::size_t(n) * n, 100 + n);
        auto a = x, b = x;
        fft::fft(a, n);
        fft::ref::fft(b, n);
        double scale = 0.0;
        for (auto& v : b) scale = std::max(scale, std::abs(v));
        CHECK(max_diff(a, b) <= 1e-12 * scale);

        fft::ifft(a, n);
        fft::ref::ifft(b, n);
        CHECK(max_diff(a, x) <= 1e-12);
        CHECK(max_diff(b, x) <= 1e-12);
    }
}

TEST_CASE("all_finite flags NaN and infinity") {
    auto x = random_vec(1000, 3);
    CHECK(kernels::all_finite(x));
    x[517] = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_FALSE(kernels::all_finite(x));
    x[517] = cplx{0.0, std::numeric_limits<double>::infinity()};
    CHECK_FALSE(kernels::all_finite(x));
}
