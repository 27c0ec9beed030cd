#include "csd/random_data.hpp"

#include <cmath>
#include <random>

#include "csd/kernels.hpp"
#include "csd/spectral.hpp"

namespace csd::lab {

namespace {

// Unit-modulus phase from raw 64-bit draws; avoids std::uniform_real_distribution
// so the stream is identical across standard library implementations.
inline cplx random_phase(std::mt19937_64& rng) {
    const double u = double(rng() >> 11) * 0x1p-53;
    const double th = 2.0 * pi * u;
    return cplx{std::cos(th), std::sin(th)};
}

ScalarField random_hat(const RandomDataSpec& spec, std::mt19937_64& rng) {
    const Grid& g = spec.grid;
    const double lo_k = spec.band_lo_k >= 0.0 ? spec.band_lo_k : g.n / 16.0;
    const double hi_k = spec.band_hi_k >= 0.0 ? spec.band_hi_k : g.n / 4.0;
    const double k_unit = 2.0 * pi / g.length;

    ScalarField fhat(g);
    bool any = false;
    for (int i1 = 0; i1 < g.n; ++i1) {
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double x1 = g.xi(i1), x2 = g.xi(i2);
            const double r = std::hypot(x1, x2);
            const cplx phase = random_phase(rng);  // drawn for every point; mask after
            bool keep;
            if (spec.annulus > 0.0) {
                keep = r > 0.5 * spec.annulus && r <= spec.annulus;
            } else {
                const double kmag = r / k_unit;
                keep = kmag >= lo_k - 1e-9 && kmag <= hi_k + 1e-9 && r > 0.0;
            }
            if (!keep) continue;
            any = true;
            fhat(i1, i2) = std::pow(1.0 + r, -(spec.s + 1.0)) * phase;
        }
    }
    if (!any) throw std::invalid_argument("random_data: spectral profile not resolvable on grid");
    return fhat;
}

}  // namespace

ScalarField random_scalar(const RandomDataSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ScalarField fhat = random_hat(spec, rng);
    ScalarField f = spectral::from_hat(fhat);
    const double norm = spectral::sobolev_norm(f, spec.s, spec.homogeneous);
    if (norm == 0.0) throw std::invalid_argument("random_data: zero norm after projection");
    kernels::scale(f.values(), cplx{1.0 / norm, 0.0});
    return f;
}

SpinorField random_spinor(const RandomDataSpec& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SpinorField f(spec.grid);
    for (int c = 0; c < 2; ++c) f.comp(c) = spectral::from_hat(random_hat(spec, rng));
    const double norm = spectral::sobolev_norm(f, spec.s, spec.homogeneous);
    if (norm == 0.0) throw std::invalid_argument("random_data: zero norm after projection");
    for (int c = 0; c < 2; ++c) kernels::scale(f.comp(c).values(), cplx{1.0 / norm, 0.0});
    return f;
}

}  // namespace csd::lab
