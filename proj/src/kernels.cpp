#include "csd/kernels.hpp"

namespace csd::kernels {

void cmul(std::span<cplx> x, std::span<const cplx> t) {
    par_for(x.size(), [&](std::size_t i) { x[i] *= t[i]; });
}

void cmul_to(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> t) {
    par_for(out.size(), [&](std::size_t i) { out[i] = x[i] * t[i]; });
}

void axpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
    par_for(y.size(), [&](std::size_t i) { y[i] += a * x[i]; });
}

void cfma(std::span<cplx> z, std::span<const cplx> x, std::span<const cplx> y) {
    par_for(z.size(), [&](std::size_t i) { z[i] += x[i] * y[i]; });
}

void scale(std::span<cplx> x, cplx a) {
    par_for(x.size(), [&](std::size_t i) { x[i] *= a; });
}

void scale(std::span<cplx> x, double a) {
    par_for(x.size(), [&](std::size_t i) { x[i] *= a; });
}

void rk4_update(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> k1,
                std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4,
                double c) {
    par_for(out.size(), [&](std::size_t i) {
        out[i] = x[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    });
}

void apply_mat2(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> i1,
                std::span<const cplx> i2, std::span<const cplx> m00, std::span<const cplx> m01,
                std::span<const cplx> m10, std::span<const cplx> m11) {
    par_for(o1.size(), [&](std::size_t i) {
        const cplx a = i1[i], b = i2[i];
        o1[i] = m00[i] * a + m01[i] * b;
        o2[i] = m10[i] * a + m11[i] * b;
    });
}

void gamma_bilinears(std::span<cplx> b0, std::span<cplx> b1, std::span<cplx> b2,
                     std::span<const cplx> p1, std::span<const cplx> p2,
                     std::span<const cplx> q1, std::span<const cplx> q2) {
    const cplx iu{0.0, 1.0};
    par_for(b0.size(), [&](std::size_t i) {
        const cplx a = std::conj(p1[i]), b = std::conj(p2[i]);
        b0[i] = a * q1[i] + b * q2[i];
        b1[i] = iu * (a * q2[i] - b * q1[i]);
        b2[i] = a * q2[i] + b * q1[i];
    });
}

void slash_apply(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> c0,
                 std::span<const cplx> c1, std::span<const cplx> c2, std::span<const cplx> s1,
                 std::span<const cplx> s2) {
    const cplx iu{0.0, 1.0};
    par_for(o1.size(), [&](std::size_t i) {
        const cplx a = s1[i], b = s2[i];
        o1[i] = c0[i] * a + (iu * c1[i] + c2[i]) * b;
        o2[i] = (iu * c1[i] - c2[i]) * a - c0[i] * b;
    });
}

double sum_abs2(std::span<const cplx> x) {
    return det_sum(x.size(), [&](std::size_t i) { return std::norm(x[i]); });
}

double max_abs(std::span<const cplx> x) {
    double m2 = par_max(x.size(), [&](std::size_t i) { return std::norm(x[i]); });
    return std::sqrt(m2);
}

bool all_finite(std::span<const cplx> x) {
    bool ok = true;
#pragma omp parallel for schedule(static) reduction(&& : ok)
    for (long long i = 0; i < (long long)x.size(); ++i)
        ok = ok && std::isfinite(x[i].real()) && std::isfinite(x[i].imag());
    return ok;
}

namespace ref {

void cmul(std::span<cplx> x, std::span<const cplx> t) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= t[i];
}

void cmul_to(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> t) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * t[i];
}

void axpy(std::span<cplx> y, cplx a, std::span<const cplx> x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void rk4_update(std::span<cplx> out, std::span<const cplx> x, std::span<const cplx> k1,
                std::span<const cplx> k2, std::span<const cplx> k3, std::span<const cplx> k4,
                double c) {
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

void apply_mat2(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> i1,
                std::span<const cplx> i2, std::span<const cplx> m00, std::span<const cplx> m01,
                std::span<const cplx> m10, std::span<const cplx> m11) {
    for (std::size_t i = 0; i < o1.size(); ++i) {
        const cplx a = i1[i], b = i2[i];
        o1[i] = m00[i] * a + m01[i] * b;
        o2[i] = m10[i] * a + m11[i] * b;
    }
}

void gamma_bilinears(std::span<cplx> b0, std::span<cplx> b1, std::span<cplx> b2,
                     std::span<const cplx> p1, std::span<const cplx> p2,
                     std::span<const cplx> q1, std::span<const cplx> q2) {
    const cplx iu{0.0, 1.0};
    for (std::size_t i = 0; i < b0.size(); ++i) {
        const cplx a = std::conj(p1[i]), b = std::conj(p2[i]);
        b0[i] = a * q1[i] + b * q2[i];
        b1[i] = iu * (a * q2[i] - b * q1[i]);
        b2[i] = a * q2[i] + b * q1[i];
    }
}

void slash_apply(std::span<cplx> o1, std::span<cplx> o2, std::span<const cplx> c0,
                 std::span<const cplx> c1, std::span<const cplx> c2, std::span<const cplx> s1,
                 std::span<const cplx> s2) {
    const cplx iu{0.0, 1.0};
    for (std::size_t i = 0; i < o1.size(); ++i) {
        const cplx a = s1[i], b = s2[i];
        o1[i] = c0[i] * a + (iu * c1[i] + c2[i]) * b;
        o2[i] = (iu * c1[i] - c2[i]) * a - c0[i] * b;
    }
}

double sum_abs2(std::span<const cplx> x) {
    double s = 0.0;
    for (const cplx& v : x) s += std::norm(v);
    return s;
}

double max_abs(std::span<const cplx> x) {
    double m = 0.0;
    for (const cplx& v : x) m = std::max(m, std::norm(v));
    return std::sqrt(m);
}

}  // namespace ref

}  // namespace csd::kernels
