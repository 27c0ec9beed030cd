#pragma once

#include "csd/field.hpp"

namespace csd::lab {

/// Random data of prescribed regularity: spectral amplitude (1+|xi|)^{-(s+1)}
/// with unit-modulus random phases, supported either on one dyadic annulus or
/// on the broadband window band_lo_k <= |k| <= band_hi_k (lattice |k| units,
/// defaulting to [N/16, N/4], i.e. away from the zero mode and the Nyquist
/// shell). The result is scaled to unit H^s (or Hdot^s) norm. Deterministic
/// per seed: coefficients are drawn serially in row-major lattice order.
struct RandomDataSpec {
    Grid grid;
    double s = 0.3;
    bool homogeneous = false;
    double annulus = 0.0;  // > 0: concentrate on the annulus (lam/2, lam]
    double band_lo_k = -1.0;
    double band_hi_k = -1.0;
};

ScalarField random_scalar(const RandomDataSpec& spec, std::uint64_t seed);
SpinorField random_spinor(const RandomDataSpec& spec, std::uint64_t seed);

}  // namespace csd::lab
