#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "csd/fft.hpp"
#include "csd/field.hpp"

namespace csd::spectral {

// Conventions (fixed project-wide):
//   forward DFT unnormalized, inverse carries 1/N^2, so Parseval reads
//   ||f||_{L^2}^2 = (L^2/N^4) sum_k |fhat_k|^2 with cell quadrature weight (L/N)^2.
//   Homogeneous negative-order symbols and 1/Delta annihilate the xi = 0 mode.

/// Scalar Fourier multiplier: a function of the wavenumber with a declared
/// rule for xi = 0 (required whenever the formula is singular there).
struct MultiplierSymbol {
    std::function<cplx(double, double)> eval;
    std::optional<cplx> zero_rule;
};

using MultiplierTable = aligned_vector<cplx>;

/// Evaluate a symbol on the whole lattice. Throws std::domain_error if the
/// symbol is non-finite at any lattice point (after applying the zero rule).
MultiplierTable make_table(const Grid& g, const MultiplierSymbol& sym);

/// Tables for common symbols.
MultiplierTable frac_deriv_table(const Grid& g, double a);       // |xi|^a, zero mode 0
MultiplierTable inv_laplacian_table(const Grid& g);              // -1/|xi|^2, zero mode 0
MultiplierTable deriv_table(const Grid& g, int axis);            // i xi_axis
MultiplierTable half_wave_table(const Grid& g, double t, int sign);  // e^{sign * i t |xi|}

ScalarField apply_multiplier(const ScalarField& f, const MultiplierSymbol& sym);
ScalarField apply_table(const ScalarField& f, const MultiplierTable& t);
SpinorField apply_table(const SpinorField& f, const MultiplierTable& t);
/// In-place on spectral coefficients.
void apply_table_hat(ScalarField& fhat, const MultiplierTable& t);

ScalarField to_hat(const ScalarField& f);
ScalarField from_hat(const ScalarField& fhat);

ScalarField frac_deriv(const ScalarField& f, double a);
SpinorField frac_deriv(const SpinorField& f, double a);
ScalarField inv_laplacian(const ScalarField& f);
ScalarField deriv(const ScalarField& f, int axis);

cplx mean(const ScalarField& f);

/// Helmholtz projections P_cf (curl-free part) and P_df (divergence-free part).
/// Both annihilate the mean; P_cf + P_df = Id on mean-zero fields.
VectorField proj_curl_free(const VectorField& b);
VectorField proj_div_free(const VectorField& b);

/// Sharp Littlewood-Paley projection onto the dyadic annulus lam/2 < |xi| <= lam.
/// If the annulus misses the resolvable lattice range, returns zero and sets
/// *resolvable = false when provided.
ScalarField lp_project(const ScalarField& f, double lam, bool* resolvable = nullptr);
/// Sharp low-pass onto |xi| < cutoff (the zero mode included).
ScalarField lp_low(const ScalarField& f, double cutoff);
void lp_project_hat(ScalarField& fhat, double lam);
void lp_low_hat(ScalarField& fhat, double cutoff);
/// Keep |xi| <= cutoff (zero mode included); complement of the annuli above cutoff.
void lp_leq_hat(ScalarField& fhat, double cutoff);
SpinorField lp_low(const SpinorField& f, double cutoff);

/// Dyadic ladder 2^m covering every nonzero lattice frequency exactly once.
std::vector<double> dyadic_scales(const Grid& g);

double sobolev_norm(const ScalarField& f, double s, bool homogeneous);
double sobolev_norm(const SpinorField& f, double s, bool homogeneous);
double sobolev_norm_hat(const ScalarField& fhat, double s, bool homogeneous);
double sobolev_norm_hat(const SpinorField& fhat, double s, bool homogeneous);

double l2_norm(const ScalarField& f);
double l2_norm(const SpinorField& f);

/// Spatial L^r norm by grid quadrature; r = infinity means the max.
double lp_norm(const ScalarField& f, double r);
double lp_norm(const SpinorField& f, double r);

/// L^r norm of a pointwise magnitude given as mag2(i) = |F(x_i)|^2.
double lp_norm_mag2(std::size_t npts, const std::function<double(std::size_t)>& mag2, double r,
                    double cell_area);

/// Temporal L^q norm of sampled values by trapezoid rule over [t0, t1].
/// Sample times must cover the interval and contain both endpoints.
double time_lq(std::span<const double> times, std::span<const double> vals, double q, double t0,
               double t1);

/// Mixed L^q_t L^r_x norm of a sampled path of fields.
double mixed_norm(std::span<const double> times, std::span<const ScalarField> snaps, double q,
                  double r, double t0, double t1);
double mixed_norm(std::span<const double> times, std::span<const SpinorField> snaps, double q,
                  double r, double t0, double t1);

/// max |Im f| / max |f| (0 for the zero field); reality diagnostic.
double max_imag_ratio(const ScalarField& f);

/// Zero the Nyquist row and column of the spectrum. First derivatives carry no
/// information there (see deriv_table), so constraint residuals compare fields
/// on these resolvable modes, the same way the mean is adjusted out.
ScalarField drop_nyquist(const ScalarField& f);

/// Spectral resampling between grids with the same L (trig interpolation /
/// truncation; the Nyquist line is split or folded).
ScalarField resample(const ScalarField& f, int n_new);
SpinorField resample(const SpinorField& f, int n_new);

constexpr double inf = std::numeric_limits<double>::infinity();

}  // namespace csd::spectral
