#include "csd/evolution.hpp"

#include <cmath>
#include <sstream>

#include "csd/kernels.hpp"
#include "csd/random_data.hpp"

namespace csd::evolve {

namespace {

const cplx iu{0.0, 1.0};

// y += a*x componentwise
void axpy2(SpinorField& y, cplx a, const SpinorField& x) {
    for (int c = 0; c < 2; ++c) kernels::axpy(y.comp(c).values(), a, x.comp(c).values());
}

SpinorField lincomb(const SpinorField& x, cplx a, const SpinorField& y) {
    SpinorField out = x;
    axpy2(out, a, y);
    return out;
}

double hs_dist(const SpinorField& a, const SpinorField& b, double s) {
    SpinorField d = a;
    axpy2(d, cplx{-1.0, 0.0}, b);
    return spectral::sobolev_norm(d, s, false);
}

}  // namespace

SpinorField make_initial_data(const Grid& g, const DataSpec& spec) {
    SpinorField f(g);
    if (spec.kind == "random_hs") {
        lab::RandomDataSpec rs{g, spec.s, false, spec.annulus, spec.band_lo_k, spec.band_hi_k};
        f = lab::random_spinor(rs, spec.seed);  // unit H^s already
    } else if (spec.kind == "gaussian") {
        const double w2 = 2.0 * spec.gaussian_width * spec.gaussian_width;
        const double L = g.length;
        auto bump = [&](double cx, double cy, ScalarField& out, double amp) {
            auto v = out.values();
            kernels::par_for(out.size(), [&](std::size_t i) {
                const int ix = int(i) / g.n, iy = int(i) % g.n;
                double dx = std::abs(ix * g.dx() - cx);
                double dy = std::abs(iy * g.dx() - cy);
                dx = std::min(dx, L - dx);
                dy = std::min(dy, L - dy);
                v[i] += amp * std::exp(-(dx * dx + dy * dy) / w2);
            });
        };
        bump(0.4 * L, 0.5 * L, f.comp(0), 1.0);
        bump(0.6 * L, 0.5 * L, f.comp(1), 0.5);
        const double norm = spectral::sobolev_norm(f, spec.s, false);
        for (int c = 0; c < 2; ++c) kernels::scale(f.comp(c).values(), cplx{1.0 / norm, 0.0});
    } else {
        throw std::invalid_argument("make_initial_data: unknown kind " + spec.kind);
    }
    if (spec.target_hs_norm != 1.0)
        for (int c = 0; c < 2; ++c)
            kernels::scale(f.comp(c).values(), cplx{spec.target_hs_norm, 0.0});
    return f;
}

SpinorField rhs(const SpinorField& psi, double m) {
    gauge::SlashField n = gauge::bilinear_n(psi, psi);
    SpinorField npsi = n.apply(psi);
    SpinorField out(psi.grid());
    auto o1 = out.comp(0).values(), o2 = out.comp(1).values();
    auto p1 = psi.comp(0).values(), p2 = psi.comp(1).values();
    auto n1 = npsi.comp(0).values(), n2 = npsi.comp(1).values();
    // F = -i gamma^0 (m psi - N psi); gamma^0 = diag(1,-1)
    kernels::par_for(out.size(), [&](std::size_t i) {
        o1[i] = -iu * (m * p1[i] - n1[i]);
        o2[i] = iu * (m * p2[i] - n2[i]);
    });
    return out;
}

Stepper::Stepper(const Grid& g, double dt, double m, bool zero_source, double blowup_threshold)
    : dt_(dt), m_(m), blowup_(blowup_threshold), zero_source_(zero_source),
      half_(dirac::make_propagator(g, 0.5 * dt)), full_(dirac::make_propagator(g, dt)) {
    if (!(dt > 0.0)) throw std::invalid_argument("Stepper: dt must be positive");
}

SpinorField Stepper::step(const SpinorField& psi, double t_now) const {
    SpinorField next(psi.grid());
    if (zero_source_) {
        next = dirac::apply_propagator(psi, full_);
    } else {
        const double h = dt_;
        SpinorField k1 = rhs(psi, m_);
        SpinorField arg2 = dirac::apply_propagator(lincomb(psi, cplx{0.5 * h, 0.0}, k1), half_);
        SpinorField m2 = rhs(arg2, m_);
        SpinorField epsi = dirac::apply_propagator(psi, half_);
        SpinorField arg3 = lincomb(epsi, cplx{0.5 * h, 0.0}, m2);
        SpinorField m3 = rhs(arg3, m_);
        SpinorField em3 = dirac::apply_propagator(m3, half_);
        SpinorField arg4 = dirac::apply_propagator(psi, full_);
        axpy2(arg4, cplx{h, 0.0}, em3);
        SpinorField m4 = rhs(arg4, m_);

        next = dirac::apply_propagator(lincomb(psi, cplx{h / 6.0, 0.0}, k1), full_);
        axpy2(next, cplx{h / 3.0, 0.0}, dirac::apply_propagator(m2, half_));
        axpy2(next, cplx{h / 3.0, 0.0}, em3);
        axpy2(next, cplx{h / 6.0, 0.0}, m4);
    }

    for (int c = 0; c < 2; ++c) {
        auto v = next.comp(c).values();
        if (!kernels::all_finite(v) || kernels::max_abs(v) > blowup_) {
            std::ostringstream os;
            os << "blow-up detected at t = " << t_now + dt_;
            throw BlowUpError(t_now + dt_, os.str());
        }
    }
    return next;
}

SimResult simulate(const SimConfig& cfg, const SpinorField& f, bool with_gauges) {
    if (!(cfg.dt > 0.0) || !(cfg.t_final > 0.0))
        throw std::invalid_argument("simulate: dt and T must be positive");
    const long n_steps = std::max(1l, std::lround(cfg.t_final / cfg.dt));
    const double dt = cfg.t_final / double(n_steps);

    Stepper stepper(f.grid(), dt, cfg.mass, false, cfg.blowup_threshold);

    SimResult res;
    auto record = [&](double t, const SpinorField& psi) {
        res.traj.times.push_back(t);
        res.traj.snaps.push_back(psi);
        if (with_gauges) res.traj.gauges.push_back(gauge::reconstruct_gauge(psi));
    };

    SpinorField psi = f;
    record(0.0, psi);
    res.step_times.push_back(0.0);
    res.step_charges.push_back(charge(psi));

    for (long k = 0; k < n_steps; ++k) {
        const double t = k * dt;
        psi = stepper.step(psi, t);
        res.step_times.push_back((k + 1) * dt);
        res.step_charges.push_back(charge(psi));
        const bool last = (k + 1 == n_steps);
        if (last || (cfg.snapshot_stride > 0 && (k + 1) % cfg.snapshot_stride == 0))
            record((k + 1) * dt, psi);
    }
    return res;
}

double charge(const SpinorField& psi) { return spectral::l2_norm(psi); }

DriftReport charge_drift(std::span<const double> charges) {
    DriftReport rep;
    if (charges.empty() || charges[0] == 0.0) return rep;
    for (double c : charges)
        rep.max_rel_drift = std::max(rep.max_rel_drift, std::abs(c - charges[0]) / charges[0]);
    return rep;
}

PicardResult picard_iterate(const SpinorField& f, double t_final, int n_iter, double m,
                            int n_steps, double s_report) {
    if (n_iter < 1) throw std::invalid_argument("picard_iterate: n_iter >= 1 required");
    if (n_steps < 1) throw std::invalid_argument("picard_iterate: n_steps >= 1 required");
    const Grid& g = f.grid();
    const double dt = t_final / n_steps;
    const auto u_dt = dirac::make_propagator(g, dt);
    const std::size_t nn = std::size_t(n_steps) + 1;

    // Free flow in spectral space; also the k = 0 iterate.
    std::vector<SpinorField> free_hat(nn, SpinorField(g));
    {
        SpinorField fhat(g);
        for (int c = 0; c < 2; ++c) fhat.comp(c) = spectral::to_hat(f.comp(c));
        free_hat[0] = fhat;
        for (std::size_t i = 1; i < nn; ++i) {
            dirac::apply_propagator_hat(fhat, u_dt);
            free_hat[i] = fhat;
        }
    }
    auto to_physical = [&](const SpinorField& hat) {
        SpinorField out = hat;
        for (int c = 0; c < 2; ++c) fft::ifft(out.comp(c));
        return out;
    };

    std::vector<SpinorField> cur(nn, SpinorField(g));
    for (std::size_t i = 0; i < nn; ++i) cur[i] = to_physical(free_hat[i]);

    PicardResult res;
    std::vector<SpinorField> prev_source;  // F along the previous iterate; empty means 0

    for (int it = 0; it < n_iter; ++it) {
        std::vector<SpinorField> source(nn, SpinorField(g));
        for (std::size_t i = 0; i < nn; ++i) source[i] = rhs(cur[i], m);

        // W_{i+1} = U(dt) (W_i + dt/2 F_i) + dt/2 F_{i+1}, trapezoid-exact Duhamel sum.
        std::vector<SpinorField> next(nn, SpinorField(g));
        next[0] = cur[0];
        SpinorField w_hat(g);
        for (std::size_t i = 0; i + 1 < nn; ++i) {
            SpinorField fi_hat(g), fip_hat(g);
            for (int c = 0; c < 2; ++c) {
                fi_hat.comp(c) = spectral::to_hat(source[i].comp(c));
                fip_hat.comp(c) = spectral::to_hat(source[i + 1].comp(c));
            }
            axpy2(w_hat, cplx{0.5 * dt, 0.0}, fi_hat);
            dirac::apply_propagator_hat(w_hat, u_dt);
            axpy2(w_hat, cplx{0.5 * dt, 0.0}, fip_hat);
            SpinorField psi_hat = free_hat[i + 1];
            axpy2(psi_hat, cplx{1.0, 0.0}, w_hat);
            next[i + 1] = to_physical(psi_hat);
        }

        double sup = 0.0;
        for (std::size_t i = 0; i < nn; ++i) sup = std::max(sup, hs_dist(next[i], cur[i], s_report));
        double l1 = 0.0;
        for (std::size_t i = 0; i + 1 < nn; ++i) {
            auto node = [&](std::size_t k) {
                return prev_source.empty()
                           ? spectral::sobolev_norm(source[k], s_report, false)
                           : hs_dist(source[k], prev_source[k], s_report);
            };
            l1 += 0.5 * dt * (node(i) + node(i + 1));
        }
        res.distances.push_back(sup + l1);

        prev_source = std::move(source);
        cur = std::move(next);
    }

    const auto& d = res.distances;
    if (d.size() >= 2) {
        const double floor = 1e3 * std::numeric_limits<double>::epsilon() * std::max(1.0, charge(f));
        res.contraction_warning = d.back() > d[d.size() - 2] && d.back() > floor;
    }

    res.traj.times.resize(nn);
    for (std::size_t i = 0; i < nn; ++i) res.traj.times[i] = i * dt;
    res.traj.snaps = std::move(cur);
    return res;
}

namespace {

SpinorField reinterpret_scaled(const SpinorField& src, double new_length, double amp) {
    SpinorField out(Grid(src.grid().n, new_length));
    for (int c = 0; c < 2; ++c) {
        auto o = out.comp(c).values();
        auto s = src.comp(c).values();
        kernels::par_for(o.size(), [&](std::size_t i) { o[i] = amp * s[i]; });
    }
    return out;
}

SpinorField evolve_plain(const SpinorField& f, double t_final, double dt, double m) {
    const long n_steps = std::max(1l, std::lround(t_final / dt));
    Stepper st(f.grid(), t_final / double(n_steps), m);
    SpinorField psi = f;
    for (long k = 0; k < n_steps; ++k) psi = st.step(psi, k * st.dt());
    return psi;
}

}  // namespace

ScalingReport scaling_check(const SpinorField& f, int lam, double t_final, int n_fine, double dt,
                            double m) {
    if (m != 0.0) throw std::invalid_argument("scaling_check: requires m = 0");
    if (lam < 1) throw std::invalid_argument("scaling_check: lambda >= 1 required");
    const Grid& g = f.grid();
    if (n_fine < g.n) throw std::invalid_argument("scaling_check: fine grid must resolve the data");

    ScalingReport rep;

    SpinorField data_fine = reinterpret_scaled(spectral::resample(f, n_fine), g.length / lam, lam);
    const double norm_f = spectral::l2_norm(f);
    rep.data_norm_rel_err = std::abs(spectral::l2_norm(data_fine) - norm_f) / norm_f;

    SpinorField psi_base = evolve_plain(f, t_final, dt, 0.0);
    SpinorField psi_fine = evolve_plain(data_fine, t_final / lam, dt / lam, 0.0);

    SpinorField target = reinterpret_scaled(spectral::resample(psi_base, n_fine), g.length / lam, lam);
    SpinorField diff = psi_fine;
    axpy2(diff, cplx{-1.0, 0.0}, target);
    const double denom = spectral::l2_norm(target);
    rep.mismatch_rel = denom == 0.0 ? 0.0 : spectral::l2_norm(diff) / denom;
    return rep;
}

YParts y_parts(const Trajectory& traj, double s, double m) {
    if (traj.size() < 3) throw std::domain_error("y_parts: need at least 3 snapshots");
    YParts y;
    std::vector<double> src(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        y.sup_hs = std::max(y.sup_hs, spectral::sobolev_norm(traj.snaps[k], s, false));
        src[k] = y_source_eq_at(traj, k, s, m);
    }
    for (std::size_t k = 0; k + 1 < traj.size(); ++k)
        y.l1_source += 0.5 * (traj.times[k + 1] - traj.times[k]) * (src[k] + src[k + 1]);
    return y;
}

double y_norm(const Trajectory& traj, double s, double m) {
    const YParts y = y_parts(traj, s, m);
    return y.sup_hs + y.l1_source;
}

double y_source_eq_at(const Trajectory& traj, std::size_t k, double s, double m) {
    const SpinorField& psi = traj.snaps[k];
    gauge::SlashField n = gauge::bilinear_n(psi, psi);
    SpinorField npsi = n.apply(psi);
    // gamma^mu d_mu psi = -i (m psi - N psi); the phase does not move H^s.
    SpinorField w = npsi;
    for (int c = 0; c < 2; ++c) {
        auto vw = w.comp(c).values();
        auto vp = psi.comp(c).values();
        kernels::par_for(vw.size(), [&](std::size_t i) { vw[i] = m * vp[i] - vw[i]; });
    }
    return spectral::sobolev_norm(w, s, false);
}

double y_source_fd_at(const Trajectory& traj, std::size_t k, double s) {
    if (k == 0 || k + 1 >= traj.size())
        throw std::domain_error("y_source_fd_at: interior snapshot required");
    const SpinorField& psi = traj.snaps[k];
    const Grid& g = psi.grid();
    const double dt2 = traj.times[k + 1] - traj.times[k - 1];

    ScalarField d1c0 = spectral::deriv(psi.comp(0), 0);
    ScalarField d1c1 = spectral::deriv(psi.comp(1), 0);
    ScalarField d2c0 = spectral::deriv(psi.comp(0), 1);
    ScalarField d2c1 = spectral::deriv(psi.comp(1), 1);

    SpinorField w(g);
    auto w1 = w.comp(0).values(), w2 = w.comp(1).values();
    auto p1p = traj.snaps[k + 1].comp(0).values(), p2p = traj.snaps[k + 1].comp(1).values();
    auto p1m = traj.snaps[k - 1].comp(0).values(), p2m = traj.snaps[k - 1].comp(1).values();
    auto a1 = d1c0.values(), a2 = d1c1.values(), b1 = d2c0.values(), b2 = d2c1.values();
    // gamma^0 dt + gamma^1 d1 + gamma^2 d2 applied componentwise:
    //   (gamma^0 u)_1 = u_1, (gamma^0 u)_2 = -u_2
    //   (gamma^1 u)_1 = i u_2, (gamma^1 u)_2 = i u_1
    //   (gamma^2 u)_1 = u_2,   (gamma^2 u)_2 = -u_1
    kernels::par_for(w.size(), [&](std::size_t i) {
        const cplx ut1 = (p1p[i] - p1m[i]) / dt2;
        const cplx ut2 = (p2p[i] - p2m[i]) / dt2;
        w1[i] = ut1 + iu * a2[i] + b2[i];
        w2[i] = -ut2 + iu * a1[i] - b1[i];
    });
    return spectral::sobolev_norm(w, s, false);
}

}  // namespace csd::evolve
