#pragma once

#include <span>
#include <vector>

#include "csd/dirac.hpp"
#include "csd/field.hpp"

namespace csd::gauge {

/// Coefficient representation of a matrix field c_mu gamma^mu (an "A-slash"
/// pattern): three scalar coefficient fields, one per gamma matrix.
struct SlashField {
    ScalarField c0, c1, c2;

    explicit SlashField(const Grid& g) : c0(g), c1(g), c2(g) {}
    const Grid& grid() const { return c0.grid(); }

    /// (c_mu gamma^mu) psi, pointwise.
    SpinorField apply(const SpinorField& psi) const;

    /// Pointwise squared Frobenius norm of the 2x2 matrix: 2(|c0|^2+|c1|^2+|c2|^2).
    double frobenius2(std::size_t i) const {
        return 2.0 * (std::norm(c0[i]) + std::norm(c1[i]) + std::norm(c2[i]));
    }
};

/// Gauge potential in the Coulomb gauge: scalar A_0 and divergence-free A.
struct GaugeState {
    ScalarField a0;
    VectorField a;
    explicit GaugeState(const Grid& g) : a0(g), a(g) {}
    const Grid& grid() const { return a0.grid(); }
};

// Index convention, fixed once for the whole artifact: spatial current indices
// are contracted with lowered components (metric diag(1,-1,-1)), i.e. every
// J^k below enters through J_k = -J^k. This single sign choice makes the
// reconstructed gauge satisfy curl A = J^0 - mean(J^0) and makes
// A_mu gamma^mu psi == N(psi,psi) psi exactly.

/// Nonlocal bilinear operator built from the gamma bilinears
/// b_nu = psibar gamma^nu phi (conjugate-linear in psi):
///   c0 = 1/Delta (d2 b1 - d1 b2)
///   c1 = -1/Delta d2 b0
///   c2 = +1/Delta d1 b0
/// with spectral derivatives and the zero mode annihilated.
SlashField bilinear_n(const SpinorField& psi, const SpinorField& phi);

/// The multiplier stage of bilinear_n alone: maps spectral gamma-bilinear
/// coefficients to spectral SlashField coefficients (in place is allowed).
void n_multiplier_hat(const Grid& g, std::span<const cplx> b0, std::span<const cplx> b1,
                      std::span<const cplx> b2, std::span<cplx> c0, std::span<cplx> c1,
                      std::span<cplx> c2);

/// Solves the elliptic constraint system for the gauge from the spinor alone:
///   A_0 = 1/Delta (d2 J^1 - d1 J^2),  A_1 = -1/Delta d2 J^0,  A_2 = 1/Delta d1 J^0.
/// Output has mean zero; div A = 0 and curl A = J^0 - mean(J^0) hold spectrally.
GaugeState reconstruct_gauge(const SpinorField& psi);

/// The contraction A_mu gamma^mu as a SlashField.
SlashField gauge_slash(const GaugeState& a);

struct ResidualRow {
    double t;
    double res_coulomb;
    double res_curl;
    double res_dynamic;  // NaN on the first/last snapshot (centered differences)
};

/// Grid-L^2 residuals of the constraint and dynamic gauge equations along an
/// aligned (psi, gauge) trajectory. Needs at least 3 snapshots. The dynamic
/// equation is dA/dt - grad A_0 = (-J_2, J_1) with lowered indices,
/// mean-adjusted on the torus; d/dt by centered differences.
std::vector<ResidualRow> gauge_residuals(std::span<const double> times,
                                         std::span<const SpinorField> psis,
                                         std::span<const GaugeState> gauges);

void write_residual_csv(const std::string& path, std::span<const ResidualRow> rows);

}  // namespace csd::gauge
