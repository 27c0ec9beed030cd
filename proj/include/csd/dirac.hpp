#pragma once

#include <array>
#include <string>
#include <vector>

#include "csd/field.hpp"
#include "csd/spectral.hpp"

namespace csd::dirac {

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

inline Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}
inline Mat2 mat_add(const Mat2& a, const Mat2& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
inline Mat2 mat_scale(cplx s, const Mat2& a) { return {s * a[0], s * a[1], s * a[2], s * a[3]}; }
inline Mat2 mat_dagger(const Mat2& a) {
    return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}
inline constexpr Mat2 mat_id() { return {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}}; }

/// The 2+1-dimensional gamma matrices, metric diag(1,-1,-1) and epsilon^{012}=1.
/// Kept as a mutable value so the selftest fault hook can corrupt a copy.
struct GammaAlgebra {
    Mat2 gamma[3] = {
        // gamma^0 = diag(1, -1)
        Mat2{cplx{1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{-1, 0}},
        // gamma^1 = [[0, i], [i, 0]]
        Mat2{cplx{0, 0}, cplx{0, 1}, cplx{0, 1}, cplx{0, 0}},
        // gamma^2 = [[0, 1], [-1, 0]]
        Mat2{cplx{0, 0}, cplx{1, 0}, cplx{-1, 0}, cplx{0, 0}},
    };
    static constexpr double metric[3] = {1.0, -1.0, -1.0};
};

struct GammaCheck {
    std::string relation;
    bool pass;
};

struct GammaReport {
    std::vector<GammaCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Verifies all 9 anticommutation relations and the 3 adjoint relations,
/// entrywise and exactly.
GammaReport check_gamma_algebra(const GammaAlgebra& g = GammaAlgebra{});

/// Dirac currents J^nu = psibar gamma^nu psi (real fields; J^0 = |psi|^2).
std::array<ScalarField, 3> dirac_current(const SpinorField& psi);

/// Half-wave flow e^{sign * i t |nabla|}.
ScalarField half_wave(const ScalarField& f, double t, int sign);
SpinorField half_wave(const SpinorField& f, double t, int sign);

/// Closed-form half-wave projectors L_+(xi), L_-(xi) diagonalizing the free
/// Dirac symbol. With w = xi_2 + i xi_1:
///   L_+- = 1/2 (I -+ H/|xi|),  H = [[0, w], [conj(w), 0]] = xi_j gamma^0 gamma^j,
/// and L_+-(0) = I/2. U(t) = e^{it|nabla|} L_+ + e^{-it|nabla|} L_-.
struct ProjectorTables {
    spectral::MultiplierTable p00, p01, p10, p11;  // entries of L_+
};
ProjectorTables half_wave_projectors(const Grid& g);

SpinorField apply_lplus(const SpinorField& f, const ProjectorTables& lp);
SpinorField apply_lminus(const SpinorField& f, const ProjectorTables& lp);

/// Spectral tables of the free propagator U(t):
///   U(t)^(xi) = cos(t|xi|) I - i sin(t|xi|) H(xi)/|xi|   (identity at xi=0).
struct PropagatorTable {
    spectral::MultiplierTable m00, m01, m10, m11;
};
PropagatorTable make_propagator(const Grid& g, double t);

SpinorField apply_propagator(const SpinorField& f, const PropagatorTable& u);
/// Same, acting on spectral coefficients in place.
void apply_propagator_hat(SpinorField& fhat, const PropagatorTable& u);

/// U(t) f: exact solution at time t of the free Dirac equation with data f.
SpinorField free_propagator(const SpinorField& f, double t);

}  // namespace csd::dirac
