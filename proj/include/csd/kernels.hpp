#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "csd/common.hpp"

// Data-parallel inner loops shared by all modules. Production versions are
// OpenMP-parallel; csd::kernels::ref holds the serial reference implementations
// kept for testing and benchmarking. Reductions use a fixed block decomposition
// so sums are bit-identical for any thread count.

namespace csd::kernels {

constexpr std::size_t reduce_block = 4096;

template <class F>
inline void par_for(std::size_t n, F&& body) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < (long long)n; ++i) body((std::size_t)i);
}

/// Blocked deterministic sum of term(i) for i in [0, n).
template <class F>
inline double det_sum(std::size_t n, F&& term) {
    const std::size_t nb = (n + reduce_block - 1) / reduce_block;
    std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < (long long)nb; ++b) {
        const std::size_t lo = (std::size_t)b * reduce_block;
        const std::size_t hi = std::min(n, lo + reduce_block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[(std::size_t)b] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class F>
inline double par_max(std::size_t n, F&& term) {
    double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
    for (long long i = 0; i < (long long)n; ++i) m = std::max(m, term((std::size_t)i));
    return m;
}

/// x[i] *= t[i]
void cmul(std::span<cplx> x, std::span<const cplx> t);
/// out[i] = x[i] * t[i]
void cmul_to(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> t);
/// y[i] += a * x[i]
void axpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
/// z[i] += x[i] * y[i]
void cfma(std::span<cplx> z, std::span<const cplx> x, std::span<const cplx> y);
void scale(std::span<cplx> x, cplx a);
void scale(std::span<cplx> x, double a);
/// out[i] = x[i] + c*(k1[i] + 2 k2[i] + 2 k3[i] + k4[i])
void rk4_update(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> k1,
                std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4,
                double c);

/// 2x2 matrix multiplier acting on a spinor in spectral space:
/// (o1,o2)[i] = M[i] * (i1,i2)[i] with M given by four coefficient tables.
void apply_mat2(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> i1,
                std::span<const cplx> i2, std::span<const cplx> m00, std::span<const cplx> m01,
                std::span<const cplx> m10, std::span<const cplx> m11);

/// Gamma bilinears b_nu = psi^dag gamma^0 gamma^nu phi, pointwise:
///   b0 = conj(p1) q1 + conj(p2) q2
///   b1 = i (conj(p1) q2 - conj(p2) q1)
///   b2 = conj(p1) q2 + conj(p2) q1
void gamma_bilinears(std::span<cplx> b0, std::span<cplx> b1, std::span<cplx> b2,
                     std::span<const cplx> p1, std::span<const cplx> p2,
                     std::span<const cplx> q1, std::span<const cplx> q2);

/// (c_mu gamma^mu) psi, pointwise:
///   o1 = c0 s1 + (i c1 + c2) s2
///   o2 = (i c1 - c2) s1 - c0 s2
void slash_apply(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> c0,
                 std::span<const cplx> c1, std::span<const cplx> c2, std::span<const cplx> s1,
                 std::span<const cplx> s2);

double sum_abs2(std::span<const cplx> x);
double max_abs(std::span<const cplx> x);
bool all_finite(std::span<const cplx> x);

namespace ref {
void cmul(std::span<cplx> x, std::span<const cplx> t);
void cmul_to(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> t);
void axpy(std::span<cplx> y, cplx a, std::span<const cplx> x);
void rk4_update(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> k1,
                std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4,
                double c);
void apply_mat2(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> i1,
                std::span<const cplx> i2, std::span<const cplx> m00, std::span<const cplx> m01,
                std::span<const cplx> m10, std::span<const cplx> m11);
void gamma_bilinears(std::span<cplx> b0, std::span<cplx> b1, std::span<cplx> b2,
                     std::span<const cplx> p1, std::span<const cplx> p2,
                     std::span<const cplx> q1, std::span<const cplx> q2);
void slash_apply(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> c0,
                 std::span<const cplx> c1, std::span<const cplx> c2, std::span<const cplx> s1,
                 std::span<const cplx> s2);
double sum_abs2(std::span<const cplx> x);
double max_abs(std::span<const cplx> x);
}  // namespace ref

}  // namespace csd::kernels
