#pragma once

#include <vector>

#include "csd/gauge.hpp"

namespace csd::evolve {

struct SimConfig {
    int n = 128;
    double length = 2.0 * pi;
    double dt = 1e-3;
    double t_final = 1.0;
    double mass = 0.0;
    double s = 0.45;          // Sobolev exponent for reporting
    int snapshot_stride = 0;  // steps between recorded snapshots; <= 0 records only endpoints
    double blowup_threshold = 1e12;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpinorField> snaps;
    std::vector<gauge::GaugeState> gauges;  // empty, or aligned with snaps

    std::size_t size() const { return times.size(); }
};

/// Initial data families: band-limited random data of prescribed regularity,
/// or a smooth Gaussian bump pair; scaled to a target H^s norm.
struct DataSpec {
    std::string kind = "random_hs";  // random_hs | gaussian
    double s = 0.45;
    double band_lo_k = 2.0, band_hi_k = 8.0, annulus = 0.0;
    double gaussian_width = 0.5;
    double target_hs_norm = 1.0;
    std::uint64_t seed = 12345;
};
SpinorField make_initial_data(const Grid& g, const DataSpec& spec);

/// Duhamel source of the cubic Dirac equation: with the free flow split off,
/// d/dt psi = -i H psi + F,  F = -i gamma^0 (m psi - N(psi,psi) psi).
SpinorField rhs(const SpinorField& psi, double m);

/// Integrating-factor (Lawson) RK4 for the cubic Dirac equation. Exact on the
/// free flow; classical order 4 on the source. Propagator tables for the half
/// and full step are built once per (grid, dt).
class Stepper {
  public:
    Stepper(const Grid& g, double dt, double m, bool zero_source = false,
            double blowup_threshold = 1e12);

    /// Advance one step from time t_now; throws BlowUpError on overflow/NaN.
    SpinorField step(const SpinorField& psi, double t_now) const;

    double dt() const { return dt_; }

  private:
    double dt_, m_, blowup_;
    bool zero_source_;
    dirac::PropagatorTable half_, full_;
};

struct SimResult {
    Trajectory traj;
    std::vector<double> step_times;    // every accepted step, including t=0
    std::vector<double> step_charges;  // L^2 norm at those times
};

/// Integrate with the exponential RK4 stepper, recording snapshots at the
/// configured stride (plus both endpoints). Gauge states are reconstructed
/// for recorded snapshots when with_gauges is set.
SimResult simulate(const SimConfig& cfg, const SpinorField& f, bool with_gauges);

/// L^2 norm of the spinor (the conserved charge).
double charge(const SpinorField& psi);

struct DriftReport {
    double max_rel_drift = 0.0;
};
DriftReport charge_drift(std::span<const double> charges);

struct PicardResult {
    Trajectory traj;                // final iterate on the full time lattice
    std::vector<double> distances;  // Y^s-surrogate distance per iteration
    bool contraction_warning = false;
};

/// Picard/Duhamel iteration on a uniform time lattice with trapezoid
/// quadrature. distances[k] measures iterate k+1 against iterate k in
/// sup_t H^s plus L^1_t H^s of the source difference.
PicardResult picard_iterate(const SpinorField& f, double t_final, int n_iter, double m,
                            int n_steps, double s_report);

struct ScalingReport {
    double data_norm_rel_err = 0.0;  // | ||lam f(lam.)||_L2 - ||f||_L2 | / ||f||_L2
    double mismatch_rel = 0.0;       // relative L^2 mismatch at the final time
};

/// Evolves f on its own grid to time t_final and the rescaled data
/// lam f(lam x) on (n_fine, L/lam) to t_final/lam, then compares
/// lam psi(lam t, lam x) with the rescaled run. Requires m = 0.
ScalingReport scaling_check(const SpinorField& f, int lam, double t_final, int n_fine, double dt,
                            double m = 0.0);

struct YParts {
    double sup_hs = 0.0;     // L^inf_t H^s
    double l1_source = 0.0;  // L^1_t H^s of gamma^mu d_mu psi
};

/// Y-norm parts with the source evaluated through the equation,
/// gamma^mu d_mu psi = -i (m psi - N(psi,psi) psi).
YParts y_parts(const Trajectory& traj, double s, double m);
double y_norm(const Trajectory& traj, double s, double m);

/// Source integrand ||gamma^mu d_mu psi(t_k)||_{H^s} at an interior node, via
/// centered time differences (for the consistency check against the
/// equation-based evaluation).
double y_source_fd_at(const Trajectory& traj, std::size_t k, double s);
/// Same node evaluated through the equation.
double y_source_eq_at(const Trajectory& traj, std::size_t k, double s, double m);

}  // namespace csd::evolve
